import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_OUTCOMES: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[1]
    if report.when == "call" or report.failed or report.skipped:
        prev = _OUTCOMES.get(name, "PASS")
        ok = report.passed and prev == "PASS"
        _OUTCOMES[name] = "PASS" if ok else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        status = _OUTCOMES.get(f"test_criterion_{k}", "NOT RUN")
        terminalreporter.write_line(f"ACCEPTANCE {k}: {status}  {title}")

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primesheaf.cli import dispatch, main
from primesheaf.errors import DanglingReferenceError, RaggedMatrixError, WorkspaceError
from primesheaf.fgmod import FgModule
from primesheaf.workspace import parse_workspace

FIXTURES = Path(__file__).parent / "fixtures"


def ws(name):
    return parse_workspace((FIXTURES / name).read_text(encoding="utf-8"))


def run(command, *args, fixture="spec_z2xz3.json"):
    return dispatch(command, list(args), ws(fixture))


# --- golden outputs ----------------------------------------------------------


def test_golden_spec():
    assert run("spec", "--module", "M") == (0, "Spec(M) = { 2M [p=(2)], 3M [p=(3)] }")


def test_golden_stalk():
    assert run("stalk", "--sheaf-of", "N", "--module", "M", "--at", "2M") == (0, "N_(2) ≅ Z/2")
    assert run("stalk", "--sheaf-of", "N", "--module", "M", "--at", "3M") == (0, "N_(3) ≅ 0")
    assert run("stalk", "--sheaf-of", "N", "--module", "M", "--at", "P2") == (0, "N_(2) ≅ Z/2")


def test_golden_sections():
    assert run("sections", "--sheaf-of", "N", "--module", "M", "--open", "2", fixture="torsion_z8.json") == (0, "0")


def test_other_commands():
    assert run("colon", "--sub", "P2") == (0, "(2)")
    assert run("is-prime", "--sub", "P3", "--module", "M") == (0, "prime, (P3:M) = (3)")
    assert run("v", "--sub", "P2", "--module", "M") == (0, "V(P2) = { 2M [p=(2)] }")
    assert run("invariants", "--module", "M") == (0, "Z/6")
    k = "kernel_z2z3z7.json"
    assert run("epsilon-kernel", "--sheaf-of", "N", "--module", "M", "--open", "30", fixture=k) == (0, "Z/6")
    assert run("gamma", "--module", "N", "--ideal", "30", fixture=k) == (0, "Z/6")
    assert run("transform", "--module", "N", "--ideal", "2", fixture="torsion_z8.json") == (0, "0")
    g = "gluing_z35.json"
    assert run("glue", "--sheaf-of", "N", "--module", "M", "--piece", "5:three", "--piece", "7:42",
               fixture=g) == (0, "17")
    assert run("restrict", "--sheaf-of", "N", "--module", "M", "--from", "1", "--to", "5",
               "--num", "3", fixture=g) == (0, "10")
    assert run("t0", "--module", "M", fixture="non_t0.json") == (
        0, "not T0: 2M and Z ⊕ 0 both have colon ideal (2)")
    assert run("t0", "--module", "Z6", fixture="non_t0.json") == (0, "T0")
    code, text = run("scheme-report", "--module", "Z", fixture="non_t0.json")
    assert code == 0 and "scheme: yes" in text and "cover: X_1" in text
    code, text = run("scheme-report", "--module", "M", fixture="non_t0.json")
    assert code == 0 and "scheme: no (T0 fails: 2M and Z ⊕ 0 share (2))" in text
    assert run("sections", "--sheaf-of", "N", "--module", "R", "--open", "x", fixture="poly_f3.json") == (
        0, "F3[x]/(x + 1) (inverting x)")


def test_verify_command():
    code, text = dispatch("verify", ["--seed", "0"], None)
    assert code == 0 and text.endswith("0 failed")
    code, text = dispatch("verify", ["--fault", "restriction"], None)
    assert code == 1 and "[fail]" in text


# --- exit codes --------------------------------------------------------------


@pytest.mark.parametrize("fixture,command,args,code", [
    ("spec_z2xz3.json", "sections", ["--sheaf-of", "N", "--module", "M", "--open", "2"], 2),
    ("gluing_z35.json", "glue", ["--sheaf-of", "N", "--module", "M", "--piece", "5:1"], 2),
    ("gluing_z35.json", "glue", ["--sheaf-of", "N", "--module", "M", "--open", "5", "--piece", "1:1"], 2),
    ("gluing_z35.json", "glue", ["--sheaf-of", "N", "--module", "M", "--piece", "5:1", "--piece", "7:1",
                                 "--piece", "1:0"], 3),
    ("non_t0.json", "spec", ["--module", "Big"], 5),
    ("non_t0.json", "spec", ["--module", "Z"], 5),
    ("torsion_z8.json", "invariants", ["--module", "Q"], 4),
    ("torsion_z8.json", "gamma", ["--module", "N", "--ideal", "x"], 4),
    ("gluing_z35.json", "glue", ["--sheaf-of", "N", "--module", "M", "--piece", "5"], 4),
    ("spec_z2xz3.json", "stalk", ["--sheaf-of", "N", "--module", "M", "--at", "6M"], 2),
    ("spec_z2xz3.json", "frobnicate", [], 64),
    ("spec_z2xz3.json", "spec", [], 64),
])
def test_exit_codes(fixture, command, args, code):
    got, text = dispatch(command, args, ws(fixture))
    assert got == code, text
    assert text


def test_workspace_errors():
    parse_workspace(json.dumps({"ring": {"kind": "integers"},
                                "modules": {"M": {"generators": 1, "relations": [[6]]}}}))
    with pytest.raises(DanglingReferenceError):
        ws("dangling.json")
    with pytest.raises(RaggedMatrixError):
        ws("ragged.json")
    with pytest.raises(WorkspaceError) as err:
        ws("bad_syntax.json")
    assert (err.value.line, err.value.column) == (3, 1)
    for bad in ['{"ring": {"kind": "reals"}}', '{"ring": {"kind": "poly_mod_p", "p": 4}}',
                '{"extra": 1}', '[1, 2]', '{"modules": {"M": {"generators": -1}}}',
                '{"modules": {"M": {"generators": 1, "relations": [[1.5]]}}}']:
        with pytest.raises(WorkspaceError):
            parse_workspace(bad)


def test_main_streams_and_codes(capsys, tmp_path):
    path = tmp_path / "w.json"
    shutil.copy(FIXTURES / "spec_z2xz3.json", path)
    assert main(["spec", "--module", "M", "-w", str(path)]) == 0
    out = capsys.readouterr()
    assert out.out == "Spec(M) = { 2M [p=(2)], 3M [p=(3)] }\n" and out.err == ""
    assert main(["sections", "--sheaf-of", "N", "--module", "M", "--open", "2", "-w", str(path)]) == 2
    out = capsys.readouterr()
    assert out.out == "" and out.err
    assert main(["spec", "--module", "M", "-w", str(tmp_path / "missing.json")]) == 4
    assert main(["bogus"]) == 64


def test_output_is_byte_identical_across_runs():
    first = [run("spec", "--module", "M"), run("stalk", "--sheaf-of", "N", "--module", "M", "--at", "2M")]
    second = [run("spec", "--module", "M"), run("stalk", "--sheaf-of", "N", "--module", "M", "--at", "2M")]
    assert first == second


def _module_from_invariants(text):
    # parse "Z^r ⊕ Z/d1 ⊕ ..." back into a presentation
    rank, factors = 0, []
    if text != "0":
        for part in text.split(" ⊕ "):
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            else:
                factors.append(int(part[2:]))
    n = rank + len(factors)
    rows = [[d if j == i else 0 for j in range(n)] for i, d in enumerate(factors)]
    return {"generators": n, "relations": rows}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.lists(st.integers(-8, 8), min_size=n, max_size=n), max_size=3))))
def test_invariants_round_trip(data):
    n, rows = data
    w = parse_workspace(json.dumps({"modules": {"M": {"generators": n, "relations": rows}}}))
    code, text = dispatch("invariants", ["--module", "M"], w)
    assert code == 0
    w2 = parse_workspace(json.dumps({"modules": {"M": _module_from_invariants(text)}}))
    M, M2 = w.module("M"), w2.module("M")
    assert isinstance(M2, FgModule) and M.isomorphic(M2)
    assert dispatch("invariants", ["--module", "M"], w2) == (0, text)


def test_console_script():
    exe = shutil.which("primesheaf")
    cmd = [exe] if exe else [sys.executable, "-m", "primesheaf"]
    res = subprocess.run(cmd + ["spec", "--module", "M", "-w", "-"],
                         input=(FIXTURES / "spec_z2xz3.json").read_text(encoding="utf-8"),
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0
    assert res.stdout == "Spec(M) = { 2M [p=(2)], 3M [p=(3)] }\n"

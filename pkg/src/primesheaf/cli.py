"""Command-line front end.

Every command reads a JSON workspace (``-w``, default ``workspace.json``),
prints one canonical text result on stdout and exits 0, or prints a
diagnostic on stderr and exits with::

    2 precondition violated   3 incompatible gluing   4 parse error
    5 guard exceeded          64 usage error / unknown command
    1 verification suite reported a failure
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import sheaf as sh
from .errors import (
    AlgebraError,
    AmbientMismatchError,
    GuardExceededError,
    IncompatibleSectionsError,
    NotACoverError,
    PreconditionError,
    WorkspaceError,
)
from .fgmod import colon, scalar_submodule, submodule_as_module, torsion_gamma, torsion_submodule
from .spectrum import (
    DEFAULT_GUARD,
    PrimeSubmodule,
    basic_open,
    is_prime,
    is_T0,
    prime_label,
    spectrum,
    t0_counterexample,
    v_closed,
)
from .verify import run_suite, scheme_report
from .workspace import Workspace, parse_workspace

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_INCOMPATIBLE = 0, 1, 2, 3
EXIT_PARSE, EXIT_GUARD, EXIT_USAGE = 4, 5, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-w", "--workspace", default="workspace.json",
                        help="workspace JSON file ('-' for stdin)")
    p = _Parser(prog="primesheaf", description="Prime spectra and the sheaf A(N, M) over a PID.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    cmd("invariants", "invariant factors of a module").add_argument("--module", required=True)
    c = cmd("colon", "colon ideal (N:M)")
    c.add_argument("--sub", required=True)
    c.add_argument("--module")
    c = cmd("gamma", "I-torsion submodule")
    c.add_argument("--module", required=True)
    c.add_argument("--ideal", required=True)
    c = cmd("spec", "enumerate Spec(M) of a torsion module")
    c.add_argument("--module", required=True)
    c.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    c = cmd("is-prime", "primality of a submodule")
    c.add_argument("--sub", required=True)
    c.add_argument("--module")
    c = cmd("v", "closed set V(N)")
    c.add_argument("--sub", required=True)
    c.add_argument("--module")
    c.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    c = cmd("stalk", "stalk of A(N, M) at a prime")
    c.add_argument("--sheaf-of", required=True)
    c.add_argument("--module", required=True)
    c.add_argument("--at", required=True)
    for name, help_ in (("sections", "sections over a basic open"), ("epsilon-kernel", "kernel of m -> m/1")):
        c = cmd(name, help_)
        c.add_argument("--sheaf-of", required=True)
        c.add_argument("--module", required=True)
        c.add_argument("--open", required=True)
    c = cmd("restrict", "restrict a section num/a^exp to a smaller open")
    c.add_argument("--sheaf-of", required=True)
    c.add_argument("--module", required=True)
    c.add_argument("--from", dest="src", required=True)
    c.add_argument("--to", dest="dst", required=True)
    c.add_argument("--num", required=True)
    c.add_argument("--exp", type=int, default=0)
    c = cmd("glue", "glue local sections; --piece GEN:NUM[:EXP] per open")
    c.add_argument("--sheaf-of", required=True)
    c.add_argument("--module", required=True)
    c.add_argument("--open", default="1")
    c.add_argument("--piece", action="append", required=True)
    c = cmd("transform", "ideal transform D_I(N)")
    c.add_argument("--module", required=True)
    c.add_argument("--ideal", required=True)
    cmd("t0", "T0 test for Spec(M)").add_argument("--module", required=True)
    cmd("scheme-report", "scheme checks for Spec(M)").add_argument("--module", required=True)
    c = sub.add_parser("verify", parents=[common], help="run the verification suite")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--fault", choices=["restriction"])
    return p


# ---------------------------------------------------------------------------
# argument helpers


def _elem(ws: Workspace, text: str):
    try:
        return ws.ring.parse(text)
    except (ValueError, TypeError):
        raise WorkspaceError(f"cannot parse ring element {text!r}") from None


def _vector(ws: Workspace, M, text: str) -> tuple:
    if text in ws.elements:
        e = ws.elements[text]
        if e.module != M:
            raise AmbientMismatchError(f"element {text!r} lives in a different module")
        return e.vec
    parts = text.split(",")
    if len(parts) != M.ngens:
        raise WorkspaceError(f"expected {M.ngens} comma-separated coordinates, got {text!r}")
    return M.reduce(tuple(_elem(ws, t) for t in parts))


def _sub_and_module(ws: Workspace, ns):
    N = ws.submodule(ns.sub)
    if ns.module is not None and ws.module(ns.module) != N.ambient:
        raise AmbientMismatchError(f"submodule {ns.sub!r} is not a submodule of {ns.module!r}")
    return N, N.ambient, ns.module or "M"


def _prime_at(ws: Workspace, M, name: str, label: str) -> PrimeSubmodule:
    if label in ws.submodules:
        sub = ws.submodules[label]
        if sub.ambient != M:
            raise AmbientMismatchError(f"{label!r} is not a submodule of {name!r}")
    elif label == f"T({name})":
        sub = torsion_submodule(M)
    elif label.endswith(name) and label[:-len(name)]:
        sub = scalar_submodule(M, _elem(ws, label[:-len(name)].strip("()* ")))
    else:
        raise WorkspaceError(f"cannot resolve prime {label!r}")
    p = is_prime(sub, M)
    if p is None:
        raise PreconditionError(f"{label} is not a prime submodule of {name}")
    return PrimeSubmodule(sub, p)


def _spec_text(M, name, primes) -> str:
    items = ", ".join(f"{prime_label(P, name)} [p={P.prime}]" for P in primes)
    return f"{{ {items} }}" if items else "{ }"


# ---------------------------------------------------------------------------
# commands


def _run(ns, ws: Optional[Workspace]) -> str:
    c = ns.command
    ring = ws.ring if ws else None
    if c == "invariants":
        return str(ws.module(ns.module))
    if c == "colon":
        N, M, _ = _sub_and_module(ws, ns)
        return str(colon(N, M))
    if c == "gamma":
        return str(submodule_as_module(torsion_gamma(ws.module(ns.module), _elem(ws, ns.ideal))))
    if c == "spec":
        M = ws.module(ns.module)
        return f"Spec({ns.module}) = {_spec_text(M, ns.module, spectrum(M, ns.guard))}"
    if c == "is-prime":
        N, M, _ = _sub_and_module(ws, ns)
        p = is_prime(N, M)
        return "not prime" if p is None else f"prime, ({ns.sub}:{ns.module or 'M'}) = {p}"
    if c == "v":
        N, M, name = _sub_and_module(ws, ns)
        V = v_closed(N, M)
        if M.rank:
            return f"V({ns.sub}) = {V}"
        return f"V({ns.sub}) = {_spec_text(M, name, [P for P in spectrum(M, ns.guard) if P in V])}"
    if c == "stalk":
        N, M = ws.module(ns.sheaf_of), ws.module(ns.module)
        P = _prime_at(ws, M, ns.module, ns.at)
        st = sh.stalk(N, M, P)
        return f"{ns.sheaf_of}_({ring.fmt(st.prime.gen)}) ≅ {st}"
    if c in ("sections", "epsilon-kernel"):
        N, M = ws.module(ns.sheaf_of), ws.module(ns.module)
        U = basic_open(_elem(ws, ns.open), M)
        if c == "sections":
            return str(sh.sections(N, M, U))
        return str(submodule_as_module(sh.epsilon_kernel(N, U)))
    if c == "restrict":
        N, M = ws.module(ns.sheaf_of), ws.module(ns.module)
        U, V = basic_open(_elem(ws, ns.src), M), basic_open(_elem(ws, ns.dst), M)
        if M.rank < 1:
            raise PreconditionError("the ambient module must be faithful (rank >= 1)")
        s = sh.make_section(N, U.gen, _vector(ws, N, ns.num), ns.exp)
        return str(sh.restrict(s, U, V))
    if c == "glue":
        N, M = ws.module(ns.sheaf_of), ws.module(ns.module)
        U = basic_open(_elem(ws, ns.open), M)
        pieces = []
        for text in ns.piece:
            bits = text.split(":")
            if len(bits) not in (2, 3):
                raise WorkspaceError(f"piece {text!r} must look like GEN:NUM or GEN:NUM:EXP")
            V = basic_open(_elem(ws, bits[0]), M)
            try:
                k = int(bits[2]) if len(bits) == 3 else 0
            except ValueError:
                raise WorkspaceError(f"bad exponent in piece {text!r}") from None
            pieces.append((V, sh.make_section(N, V.gen, _vector(ws, N, bits[1]), k)))
        return str(sh.glue(pieces, U))
    if c == "transform":
        return str(sh.ideal_transform(ws.module(ns.module), _elem(ws, ns.ideal)))
    if c == "t0":
        M = ws.module(ns.module)
        if is_T0(M):
            return "T0"
        P, Q = t0_counterexample(M)
        return (f"not T0: {prime_label(P, ns.module)} and {prime_label(Q, ns.module)}"
                f" both have colon ideal {P.prime}")
    if c == "scheme-report":
        return _format_scheme(scheme_report(ws.module(ns.module)))
    raise UsageError(f"unknown command {c!r}")


def _format_scheme(rep) -> str:
    cert = rep.certificate
    yes = {True: "yes", False: "no"}
    lines = [f"module: {rep.instance}",
             f"faithful: {yes[cert['faithful']]}",
             f"primeful: {yes[cert['primeful']]}",
             f"T0: {yes[cert['T0']]}"]
    if "note" in cert:
        lines.append(f"note: {cert['note']}")
    if cert["scheme"]:
        base = cert.get("base")
        lines.append("scheme: yes" + (f" (over the base {base}, where M is faithful)" if base else ""))
        lines.append("cover: " + ", ".join(f"X_{c['g']}" for c in cert["cover"]))
        lines.append("psi: " + ", ".join(f"{k} <- {v}" for k, v in cert["psi"].items()))
    else:
        ce = cert["t0_counterexample"]
        lines.append(f"scheme: no (T0 fails: {ce['primes'][0]} and {ce['primes'][1]} share {ce['colon_ideal']})")
    return "\n".join(lines)


def _execute(ns, ws) -> tuple[int, str]:
    try:
        if ns.command == "verify":
            reports = run_suite(ns.seed, fault=ns.fault)
            text = "\n".join(str(r) for r in reports)
            failed = sum(r.status == "fail" for r in reports)
            text += f"\n{len(reports)} reports, {failed} failed"
            return (EXIT_FAIL if failed else EXIT_OK), text
        return EXIT_OK, _run(ns, ws)
    except UsageError as exc:
        return EXIT_USAGE, str(exc)
    except WorkspaceError as exc:
        return EXIT_PARSE, str(exc)
    except IncompatibleSectionsError as exc:
        return EXIT_INCOMPATIBLE, str(exc)
    except GuardExceededError as exc:
        return EXIT_GUARD, str(exc)
    except (PreconditionError, AmbientMismatchError, NotACoverError) as exc:
        return EXIT_PRECONDITION, str(exc)
    except AlgebraError as exc:
        return EXIT_PRECONDITION, str(exc)


def dispatch(command: str, args: Sequence[str], workspace: Optional[Workspace]) -> tuple[int, str]:
    """Run one command against an already parsed workspace."""
    try:
        ns = build_parser().parse_args([command, *args])
    except UsageError as exc:
        return EXIT_USAGE, str(exc)
    return _execute(ns, workspace)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ws = None
    if ns.command != "verify":
        try:
            if ns.workspace == "-":
                text = sys.stdin.read()
            else:
                with open(ns.workspace, encoding="utf-8") as fh:
                    text = fh.read()
            ws = parse_workspace(text)
        except OSError as exc:
            print(f"cannot read workspace: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except WorkspaceError as exc:
            print(f"workspace error: {exc}", file=sys.stderr)
            return EXIT_PARSE
    code, text = _execute(ns, ws)
    print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

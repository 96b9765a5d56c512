"""Theorem-verification harness producing re-checkable reports."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import IncompatibleSectionsError, NotACoverError, PreconditionError
from .fgmod import (
    FgModule,
    format_invariants,
    localize,
    relocalize,
    submodule_as_module,
    torsion_exponent,
    torsion_gamma,
)
from .ring_core import ZZ, divides, gcd, radical
from . import sheaf as sh
from .spectrum import (
    OpenSet,
    basic_open,
    finite_subcover,
    is_primeful,
    is_T0,
    is_prime,
    open_intersect,
    prime_label,
    t0_by_fibers,
    t0_counterexample,
)

PASS, FAIL, NA = "pass", "fail", "n/a"


@dataclass
class TheoremReport:
    theorem: str
    instance: str
    status: str
    certificate: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __str__(self):
        line = f"[{self.status}] {self.theorem}: {self.instance}"
        if self.counterexample:
            line += f"  counterexample: {self.counterexample}"
        return line


def _box(N: FgModule, bound: int = 3):
    """Deterministic sample of elements: coordinates in ``[-bound, bound]`` per generator."""
    ring = N.ring
    if N.rank == 0 and N.order() <= 512:
        return [e.vec for e in N.elements()]
    rng = random.Random(N.ngens * 7919 + len(N.relations))
    out = [N.zero().vec] + [g.vec for g in N.generators()]
    for _ in range(40):
        out.append(N.reduce(tuple(ring.random_element(rng, bound) for _ in range(N.ngens))))
    return out


# ---------------------------------------------------------------------------
# fundamental exact sequence 0 -> Γ -> N -> N_a -> H^1 -> 0


def check_fundamental_sequence(N: FgModule, a) -> TheoremReport:
    ring = N.ring
    a = ring.coerce(a)
    if not a:
        raise PreconditionError("the inverted element must be nonzero")
    r = radical(a, ring)
    inst = f"N = {N}, a = {ring.fmt(a)}"
    gamma = torsion_gamma(N, r)
    samples = _box(N)
    for m in samples:
        in_kernel = sh.is_zero_section(sh.make_section(N, r, m, 0))
        if in_kernel != gamma.contains(m):
            return TheoremReport("fundamental-sequence", inst, FAIL,
                                 counterexample={"element": m, "in_kernel": in_kernel,
                                                 "in_gamma": gamma.contains(m)})
    witnesses = []
    for m in samples[:24]:
        for k in range(3):
            s = sh.make_section(N, r, m, k)
            h, w = sh.coker_witness(s)
            lhs = sh.section_scale(r ** h, s)
            if not sh.section_eq(lhs, sh.make_section(N, r, w, 0)):
                return TheoremReport("fundamental-sequence", inst, FAIL,
                                     counterexample={"section": str(s), "h": h, "m": w})
            witnesses.append((m, k, h, w))
    L = localize(N, r)
    if not relocalize(L).same_type(L):
        return TheoremReport("fundamental-sequence", inst, FAIL,
                             counterexample={"section_module": str(L), "relocalized": str(relocalize(L))})
    # Γ of the section module vanishes: no stored torsion shares a prime with a
    stray = [d for d in L.torsion if not ring.is_unit(gcd(ring, d, r))]
    if stray:
        return TheoremReport("fundamental-sequence", inst, FAIL, counterexample={"torsion": stray})
    cert = {
        "kernel": str(submodule_as_module(gamma)),
        "kernel_basis": [tuple(v) for v in gamma.basis],
        "torsion_exponent": torsion_exponent(N, r),
        "witnesses": witnesses,
        "sections": str(L),
        "h1_section_module": "0",
    }
    return TheoremReport("fundamental-sequence", inst, PASS, cert)


def recheck_fundamental_sequence(N: FgModule, a, report: TheoremReport) -> bool:
    """Re-verify the certificate by recomputation (no reuse of cached results)."""
    ring = N.ring
    r = radical(ring.coerce(a), ring)
    e = report.certificate["torsion_exponent"]
    for v in report.certificate["kernel_basis"]:
        if any(N.reduce(tuple(r ** e * x for x in v))):
            return False
    for m, k, h, w in report.certificate["witnesses"]:
        # a^h * (m / a^k) = w / 1  <=>  a^H (a^h m - a^k w) = 0 in N
        diff = tuple(r ** h * x - r ** k * y for x, y in zip(N.reduce(m), N.reduce(w)))
        if any(N.reduce(tuple(r ** e * x for x in diff))):
            return False
    return True


def check_h_vanishing(N: FgModule, a, i: int) -> TheoremReport:
    if i < 0:
        raise ValueError("cohomological degree must be nonnegative")
    if i < 2:
        return check_fundamental_sequence(N, a)
    ring = N.ring
    inst = f"N = {N}, a = {ring.fmt(ring.coerce(a))}, i = {i}"
    cert = {
        "justification": "principal ideal: the Čech complex 0 -> N -> N_a -> 0 has length 1",
        "cech_terms": [str(N), str(localize(N, a))],
        "degree": i,
    }
    return TheoremReport("local-cohomology-vanishing", inst, PASS, cert)


def check_torsion_sections_zero(N: FgModule, U: OpenSet) -> TheoremReport:
    ring = N.ring
    inst = f"N = {N}, U = {U}"
    if U.is_empty():
        return TheoremReport("torsion-sections-vanish", inst, PASS, {"sections": "0", "reason": "empty open"})
    gamma = torsion_gamma(N, U.gen)
    if not gamma.is_whole():
        return TheoremReport("torsion-sections-vanish", inst, NA, {"gamma": str(submodule_as_module(gamma))})
    L = localize(N, U.gen)
    if not L.is_zero():
        return TheoremReport("torsion-sections-vanish", inst, FAIL, counterexample={"sections": str(L)})
    cert = {"sections": "0", "killing_exponent": torsion_exponent(N, U.gen), "generator": ring.fmt(U.gen)}
    if not U.ambient.rank:
        cert["note"] = "ambient not faithful; value computed from the localization"
    return TheoremReport("torsion-sections-vanish", inst, PASS, cert)


# ---------------------------------------------------------------------------
# scheme report


def scheme_report(M: FgModule) -> TheoremReport:
    """Faithful / primeful / T0 checks; ``certificate["scheme"]`` holds the verdict.

    ``status`` is ``pass`` when the verdict is certified (an affine cover, or a
    named pair of primes violating T0) and ``fail`` only when two independent
    routes to the T0 verdict disagree.
    """
    if M.is_zero():
        raise PreconditionError("the zero module has empty spectrum")
    ring = M.ring
    faithful = M.rank >= 1
    witnesses = {str(p): prime_label(P) for p, P in is_primeful(M).items()}
    t0 = is_T0(M)
    cert = {"faithful": faithful, "primeful": True, "primeful_witnesses": witnesses, "T0": t0}
    if M.rank <= 1:
        by_fibers = t0_by_fibers(M)
        cert["T0_by_fibers"] = by_fibers
        if by_fibers != t0:
            return TheoremReport("scheme", str(M), FAIL, cert,
                                 counterexample={"cyclicity": t0, "fiber_counting": by_fibers})
    if not faithful:
        cert["base"] = format_invariants(ring, 0, (M.exponent(),))
        cert["note"] = f"not faithful over {ring.name}: Ann(M) = ({ring.fmt(M.exponent())})"
    cert["scheme"] = t0
    if not t0:
        P, Q = t0_counterexample(M)
        cert["t0_counterexample"] = {"primes": [prime_label(P), prime_label(Q)], "colon_ideal": str(P.prime)}
        return TheoremReport("scheme", str(M), PASS, cert)
    # X = X_1 is one affine piece; ψ identifies it with Spec of the base ring
    cert["cover"] = [{"g": ring.fmt(ring.one), "bezout": {"t": 1, "coeffs": [ring.fmt(ring.one)]}}]
    cert["psi"] = {str(p): prime_label(P) for p, P in is_primeful(M).items()}
    cert["noetherian"] = True
    return TheoremReport("scheme", str(M), PASS, cert)


def recheck_scheme(M: FgModule, report: TheoremReport) -> bool:
    """Recompute the cover certificate, or the T0 counterexample pair."""
    if not report.certificate["scheme"]:
        P, Q = t0_counterexample(M)
        return P.sub != Q.sub and P.prime == Q.prime and is_prime(P.sub, M) == is_prime(Q.sub, M) == P.prime
    ring = M.ring
    for piece in report.certificate["cover"]:
        t = piece["bezout"]["t"]
        c = ring.parse(piece["bezout"]["coeffs"][0])
        g = ring.parse(piece["g"])
        # the cover {X_g} reaches the whole space: 1^t = c * g
        if ring.one ** t != c * g:
            return False
    colons = list(report.certificate["psi"])
    return len(colons) == len(set(colons)) and t0_by_fibers(M)


# ---------------------------------------------------------------------------
# sheaf-axiom battery

Restrictor = Callable[[sh.Section, OpenSet, OpenSet], sh.Section]


def _random_section(rng, N: FgModule, a):
    ring = N.ring
    num = tuple(ring.random_element(rng, 9) for _ in range(N.ngens))
    return sh.make_section(N, a, num, rng.randrange(3))


def _random_cover(rng, M: FgModule, f, primes=(2, 3, 5, 7, 11)):
    """Between one and four basic opens, each inside ``D(f)``, covering it."""
    ring = M.ring
    base = [ring.coerce(q) for q in primes if not divides(ring, q, f)]
    for _ in range(50):
        size = rng.randint(1, 4)
        gens = [f * _product(ring, rng.sample(base, rng.randint(0, 2))) for _ in range(size)]
        opens = [basic_open(g, M) for g in gens]
        try:
            finite_subcover(basic_open(f, M), opens)
        except NotACoverError:
            continue
        return opens
    return [basic_open(f, M)]


def _product(ring, xs):
    out = ring.one
    for x in xs:
        out = out * x
    return out


def sheaf_battery(N: FgModule, f, rng, restrictor: Restrictor = sh.restrict, trials: int = 4) -> TheoremReport:
    """Presheaf laws, ε-compatibility, identity and gluing axioms on random covers."""
    ring = N.ring
    M = FgModule.free(ring, 1)
    U = basic_open(f, M)
    inst = f"N = {N}, U = {U}"
    checked = 0

    def fail(**ce):
        return TheoremReport("sheaf-axioms", inst, FAIL, {"checked": checked}, counterexample=ce)

    for _ in range(trials):
        s = _random_section(rng, N, U.gen)
        if not sh.section_eq(restrictor(s, U, U), s):
            return fail(law="restrict(s, U, U) = s", section=str(s), open=str(U))
        m = tuple(ring.random_element(rng, 9) for _ in range(N.ngens))
        cover = _random_cover(rng, M, U.gen)
        for V in cover:
            if not sh.section_eq(restrictor(sh.epsilon(N, U, m), U, V), sh.epsilon(N, V, m)):
                return fail(law="restriction commutes with epsilon", element=m, open=str(V))
            for W in cover:
                W2 = open_intersect(V, W)
                lhs = restrictor(restrictor(s, U, V), V, W2)
                rhs = restrictor(s, U, W2)
                if not sh.section_eq(lhs, rhs):
                    return fail(law="transitivity", section=str(s), chain=[str(U), str(V), str(W2)])
        pieces = [(V, restrictor(s, U, V)) for V in cover]
        try:
            glued = sh.glue(pieces, U)
        except IncompatibleSectionsError as exc:
            return fail(law="gluing of restrictions", section=str(s), error=str(exc))
        if not sh.section_eq(glued, s):
            return fail(law="uniqueness", section=str(s), glued=str(glued))
        checked += 1
    return TheoremReport("sheaf-axioms", inst, PASS, {"checked": checked})


def mutated_restrict(s: sh.Section, U: OpenSet, V: OpenSet) -> sh.Section:
    """A deliberately wrong restriction: forgets to rescale the numerator."""
    t = sh.restrict(s, U, V)
    return sh.canonical(s.module, V.gen, s.num, t.exp)


FAULTS = {"restriction": mutated_restrict}


# ---------------------------------------------------------------------------
# suite


@dataclass(frozen=True)
class Instance:
    kind: str  # "sheaf" or "scheme"
    module: FgModule
    gen: object = None

    @property
    def key(self) -> str:
        g = "" if self.gen is None else f" @ {self.module.ring.fmt(self.gen)}"
        return f"{self.kind}: {self.module}{g}"


FACTORS = (2, 3, 4, 5, 7, 8, 9, 35)
OPENS = (1, 2, 3, 5, 6, 10, 30)


def default_family(seed: int = 0, size: int = 12) -> list[Instance]:
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        orders = sorted(rng.sample(FACTORS, rng.randint(0, 3)))
        rank = rng.randint(0, 2)
        if not orders and not rank:
            rank = 1
        out.append(Instance("sheaf", FgModule.direct_sum(ZZ, orders, rank), rng.choice(OPENS)))
    out.append(Instance("sheaf", FgModule.cyclic(ZZ, 8), 2))
    out.append(Instance("sheaf", FgModule.cyclic(ZZ, 6), 30))
    for M in (FgModule.free(ZZ, 1), FgModule.cyclic(ZZ, 6), FgModule.direct_sum(ZZ, [0, 2])):
        out.append(Instance("scheme", M))
    return out


def run_suite(seed: int = 0, family: Optional[Sequence[Instance]] = None,
              fault: Optional[str] = None) -> list[TheoremReport]:
    """Run every check on each instance; deterministic for a fixed seed."""
    if family is None:
        family = default_family(seed)
    restrictor = FAULTS[fault] if fault else sh.restrict
    rng = random.Random(seed)
    reports = []
    for inst in family:
        if inst.kind == "scheme":
            reports.append(scheme_report(inst.module))
            continue
        N, f = inst.module, inst.gen
        M = FgModule.free(N.ring, 1)
        reports.append(check_fundamental_sequence(N, f))
        reports.append(check_h_vanishing(N, f, 2))
        reports.append(check_torsion_sections_zero(N, basic_open(f, M)))
        reports.append(sheaf_battery(N, f, rng, restrictor))
    return reports

"""Prime submodules and the Zariski topology on ``Spec(M)``.

Over a PID a proper submodule ``P ≤ M`` is prime exactly when ``(P:M)`` is a
prime ideal and, in the case ``(P:M) = (0)``, ``M/P`` is torsion-free.  For a
nonzero prime ``p`` the ``p``-prime submodules are the pullbacks of proper
subspaces of the ``R/(p)``-vector space ``M/pM``.

Opens and closeds never separate primes that share a colon ideal, so they are
stored intensionally by a squarefree generator: the closed set ``V(c)``
contains ``P`` iff ``gen(P:M)`` divides ``c`` and the open ``D(b)`` is its
complement.  For a module with nonzero annihilator only primes dividing
``rad(Ann M)`` exist, and generators are reduced to that support.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import AmbientMismatchError, GuardExceededError, NotACoverError, PreconditionError
from .fgmod import (
    format_invariants,
    FgModule,
    Submodule,
    annihilator,
    colon,
    scalar_submodule,
    sub_intersect,
    torsion_submodule,
)
from .ring_core import PrincipalIdeal, bezout, divides, exact_div, gcd, radical

DEFAULT_GUARD = 12


class InfiniteSpectrumError(GuardExceededError):
    """The requested set of primes is infinite."""


@dataclass(frozen=True)
class PrimeSubmodule:
    sub: Submodule
    prime: PrincipalIdeal

    @property
    def ambient(self) -> FgModule:
        return self.sub.ambient


# ---------------------------------------------------------------------------
# primality and fibers


def is_prime(N: Submodule, M: FgModule) -> Optional[PrincipalIdeal]:
    """Return ``(N:M)`` if ``N`` is a prime submodule of ``M``, else ``None``."""
    if N.ambient != M:
        raise AmbientMismatchError("submodule does not live in this module")
    Q = N.quotient()
    if Q.is_zero():
        return None
    I = annihilator(Q)
    if not I.is_prime():
        return None
    if I.is_zero() and Q.factors:
        return None
    return I


def _prime_elem(M: FgModule, p):
    ring = M.ring
    p = p.gen if isinstance(p, PrincipalIdeal) else ring.canonical(ring.coerce(p))
    if not ring.is_prime(p):
        raise PreconditionError(f"{ring.fmt(p)} is not a prime element")
    return p


def fiber_dimension(M: FgModule, p) -> int:
    """``dim_{R/(p)} M/pM``."""
    ring = M.ring
    return sum(1 for d in M.components if divides(ring, p, d))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def proper_subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n))


def _rref_subspaces(n: int, field: list, r: int, zero, one):
    """Reduced row echelon bases of all ``r``-dimensional subspaces of ``k^n``."""
    for pivots in itertools.combinations(range(n), r):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for values in itertools.product(field, repeat=len(free)):
            rows = [[zero] * n for _ in range(r)]
            for i, c in enumerate(pivots):
                rows[i][c] = one
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            yield rows


def spec_p(M: FgModule, p, guard: int = DEFAULT_GUARD) -> list[PrimeSubmodule]:
    """All ``p``-prime submodules of ``M`` for a nonzero prime ``p``."""
    ring = M.ring
    p = _prime_elem(M, p)
    idx = [i for i, d in enumerate(M.components) if divides(ring, p, d)]
    n = len(idx)
    q = ring.residue_count(p)
    count = proper_subspace_count(n, q)
    if count > guard:
        raise GuardExceededError(f"Spec_({ring.fmt(p)}) has {count} members (guard {guard})")
    gens = M.component_generators()
    base = [tuple(p * x for x in g) for g in gens]
    field = list(ring.residues(p))
    prime = PrincipalIdeal(ring, p)
    out = []
    for r in range(n):
        for rows in _rref_subspaces(n, field, r, ring.zero, ring.one):
            lifts = []
            for row in rows:
                v = (ring.zero,) * M.ngens
                for c, i in zip(row, idx):
                    if c:
                        v = tuple(a + c * b for a, b in zip(v, gens[i]))
                lifts.append(v)
            out.append(PrimeSubmodule(Submodule(M, base + lifts), prime))
    return out


def spec_zero(M: FgModule) -> list[PrimeSubmodule]:
    """The ``(0)``-prime submodules; only finite when ``rank(M) ≤ 1``."""
    if M.rank >= 2:
        raise InfiniteSpectrumError("rank >= 2 modules have infinitely many (0)-primes")
    if M.rank == 0:
        return []
    return [PrimeSubmodule(torsion_submodule(M), PrincipalIdeal(M.ring, M.ring.zero))]


def spectrum(M: FgModule, guard: int = DEFAULT_GUARD) -> list[PrimeSubmodule]:
    """The whole (finite) spectrum of a torsion module, ordered by prime."""
    if M.rank:
        raise InfiniteSpectrumError("a module of positive rank has infinitely many primes")
    if M.is_zero():
        return []
    primes = [q for q, _ in M.ring.factor(M.exponent())]
    primes.sort(key=M.ring.sort_key)
    out = []
    for q in primes:
        out.extend(spec_p(M, q, guard))
    return out


def psi(P: PrimeSubmodule) -> PrincipalIdeal:
    """Colon ideal ``(P:M)``; its image modulo ``Ann(M)`` is ``ψ(P)``."""
    return P.prime


# ---------------------------------------------------------------------------
# topology


def _support_radical(M: FgModule):
    return radical(M.exponent(), M.ring)


def _canonical_gen(M: FgModule, b):
    ring = M.ring
    b = radical(ring.coerce(b), ring)
    return gcd(ring, b, _support_radical(M))


@dataclass(frozen=True, eq=False)
class _Locus:
    ambient: FgModule
    gen: object

    def __post_init__(self):
        object.__setattr__(self, "gen", _canonical_gen(self.ambient, self.gen))

    def _check(self, other):
        if self.ambient != other.ambient:
            raise AmbientMismatchError("sets in spectra of different modules")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.ambient == other.ambient and self.gen == other.gen

    def __hash__(self):
        return hash((type(self).__name__, self.ambient, self.gen))


class ClosedSet(_Locus):
    """``V(c) = {P : gen(P:M) divides c}``."""

    def __contains__(self, P: PrimeSubmodule) -> bool:
        return divides(self.ambient.ring, P.prime.gen, self.gen)

    def complement(self) -> "OpenSet":
        return OpenSet(self.ambient, self.gen)

    def __str__(self):
        return f"V(({self.ambient.ring.fmt(self.gen)}))"


class OpenSet(_Locus):
    """``D(b) = X \\ V(b)``; ``b`` is the radical of the defining colon ideal."""

    def is_empty(self) -> bool:
        return self.gen == _support_radical(self.ambient)

    def is_whole(self) -> bool:
        return self.ambient.ring.is_unit(self.gen)

    def __contains__(self, P: PrimeSubmodule) -> bool:
        return open_member(P, self)

    def complement(self) -> ClosedSet:
        return ClosedSet(self.ambient, self.gen)

    def __str__(self):
        return f"D({self.ambient.ring.fmt(self.gen)})"


def v_closed(N: Submodule, M: FgModule) -> ClosedSet:
    return ClosedSet(M, colon(N, M).gen)


def open_complement(K: Submodule, M: FgModule) -> OpenSet:
    """``X \\ V(K)``."""
    return OpenSet(M, colon(K, M).gen)


def basic_open(r, M: FgModule) -> OpenSet:
    """``X_r = X \\ V(rM)``."""
    return OpenSet(M, colon(scalar_submodule(M, r), M).gen)


def open_union(U: OpenSet, V: OpenSet) -> OpenSet:
    U._check(V)
    return OpenSet(U.ambient, gcd(U.ambient.ring, U.gen, V.gen))


def open_intersect(U: OpenSet, V: OpenSet) -> OpenSet:
    U._check(V)
    return OpenSet(U.ambient, U.gen * V.gen)


def open_subset(U: OpenSet, V: OpenSet) -> bool:
    """``U ⊆ V``."""
    U._check(V)
    return divides(U.ambient.ring, V.gen, U.gen)


def open_member(P: PrimeSubmodule, U: OpenSet) -> bool:
    if P.ambient != U.ambient:
        raise AmbientMismatchError("prime and open live in different spectra")
    return not divides(U.ambient.ring, P.prime.gen, U.gen)


@dataclass(frozen=True)
class Support:
    """``Supp(U) = {(P:M) : P ∈ U}`` for a faithful primeful (or torsion) ``M``."""

    ring: object
    excluded: tuple
    includes_zero: bool
    primes: Optional[tuple]

    def __contains__(self, p: PrincipalIdeal) -> bool:
        if p.is_zero():
            return self.includes_zero
        if self.primes is not None:
            return p in self.primes
        return all(not divides(self.ring, q, p.gen) for q in self.excluded)


def supp(U: OpenSet) -> Support:
    M = U.ambient
    ring = M.ring
    excluded = tuple(q for q, _ in ring.factor(U.gen)) if U.gen else ()
    if M.rank:
        return Support(ring, excluded, bool(U.gen), None if U.gen else ())
    s = _support_radical(M)
    primes = tuple(PrincipalIdeal(ring, q) for q, _ in ring.factor(s) if not divides(ring, q, U.gen))
    return Support(ring, excluded, False, primes)


# ---------------------------------------------------------------------------
# module-level predicates


def is_faithful(M: FgModule) -> bool:
    return M.rank >= 1


def _default_primes(M: FgModule, extra: int = 4):
    ring = M.ring
    seen = []
    for d in M.factors:
        for q, _ in ring.factor(d):
            if q not in seen:
                seen.append(q)
    if M.rank:
        for q in itertools.islice(ring.primes(), extra):
            if q not in seen:
                seen.append(q)
    return sorted(seen, key=ring.sort_key)


def maximal_witness(M: FgModule, p) -> PrimeSubmodule:
    """A ``p``-prime submodule containing ``pM`` of codimension one."""
    ring = M.ring
    p = _prime_elem(M, p)
    comps = M.components
    gens = M.component_generators()
    i0 = next((i for i, d in enumerate(comps) if divides(ring, p, d)), None)
    if i0 is None:
        raise PreconditionError(f"({ring.fmt(p)}) is not in V(Ann(M))")
    sub = [tuple(p * x for x in gens[i0])] + [g for i, g in enumerate(gens) if i != i0]
    return PrimeSubmodule(Submodule(M, sub), PrincipalIdeal(ring, p))


def is_primeful(M: FgModule, primes: Optional[Sequence] = None) -> dict:
    """Witness map ``prime ideal -> prime submodule`` over ``V(Ann M)``.

    A nonzero finitely generated module over a PID is always primeful; the
    map is returned for the primes dividing the invariant factors (and a few
    extra primes when ``M`` is faithful), together with ``T(M)`` for ``(0)``.
    """
    if M.is_zero():
        raise PreconditionError("the zero module has no spectrum")
    ring = M.ring
    primes = _default_primes(M) if primes is None else [_prime_elem(M, q) for q in primes]
    out = {}
    for q in primes:
        out[PrincipalIdeal(ring, q)] = maximal_witness(M, q)
    if M.rank:
        zero = PrincipalIdeal(ring, ring.zero)
        out[zero] = PrimeSubmodule(torsion_submodule(M), zero)
    return out


def is_T0(M: FgModule) -> bool:
    """T0 iff ``M`` is cyclic (validated against fiber counting)."""
    if M.is_zero():
        raise PreconditionError("the zero module has empty spectrum")
    return M.is_cyclic()


def fiber_sizes(M: FgModule, guard: int = 4096) -> dict:
    """``|Spec_p(M)|`` by enumeration for every prime that can have a fiber > 1.

    The zero prime is reported with ``None`` meaning infinite.
    """
    ring = M.ring
    out = {}
    for q in _default_primes(M, extra=1):
        out[PrincipalIdeal(ring, q)] = len(spec_p(M, q, guard))
    if M.rank:
        out[PrincipalIdeal(ring, ring.zero)] = None if M.rank >= 2 else len(spec_zero(M))
    return out


def t0_by_fibers(M: FgModule, guard: int = 4096) -> bool:
    return all(n is not None and n <= 1 for n in fiber_sizes(M, guard).values())


def t0_counterexample(M: FgModule, guard: int = 64):
    """Two distinct primes with equal colon ideal, or ``None`` if T0."""
    if M.rank >= 2:
        return spec_zero_pair(M)
    ring = M.ring
    for q in _default_primes(M, extra=1):
        if fiber_dimension(M, q) < 2:
            continue
        pm = PrimeSubmodule(scalar_submodule(M, q), PrincipalIdeal(ring, q))
        if M.rank:
            # free part plus q-multiples of the torsion: the shape "R ⊕ 0"
            gens = [g if not d else tuple(q * x for x in g)
                    for d, g in zip(M.components, M.component_generators())]
            return pm, PrimeSubmodule(Submodule(M, gens), PrincipalIdeal(ring, q))
        fib = spec_p(M, q, guard)
        return pm, next(P for P in fib if P.sub != pm.sub)
    return None


def spec_zero_pair(M: FgModule):
    """Two distinct ``(0)``-primes of a module of rank >= 2."""
    ring = M.ring
    gens = M.component_generators()
    comps = M.components
    free = [i for i, d in enumerate(comps) if not d]
    tors = [g for i, g in enumerate(gens) if comps[i]]
    zero = PrincipalIdeal(ring, ring.zero)
    # kill all but one free direction, in two different ways
    a = Submodule(M, tors + [gens[i] for i in free[1:]])
    b = Submodule(M, tors + [gens[i] for i in free if i != free[1]])
    return PrimeSubmodule(a, zero), PrimeSubmodule(b, zero)


# ---------------------------------------------------------------------------
# Zariski radical and covers


def zrad_colon(N: Submodule, M: FgModule) -> PrincipalIdeal:
    return colon(N, M).radical()


def zrad(N: Submodule, M: FgModule, guard: int = 1 << 20) -> Submodule:
    """Intersection of all primes in ``V(N)`` (torsion ``M`` only)."""
    if M.rank:
        raise InfiniteSpectrumError("zrad needs a finite spectrum")
    V = v_closed(N, M)
    result = Submodule.whole(M)
    for P in spectrum(M, guard):
        if P in V:
            result = sub_intersect(result, P.sub)
    return result


def power_bezout(ring, f, gens):
    """Return ``(t, coeffs)`` with ``f^t = sum(c_i * g_i)`` and ``t`` minimal (``t >= 1``).

    Raises :class:`NotACoverError` when no power of ``f`` lies in the ideal.
    """
    g, coeffs = bezout(ring, list(gens))
    if not g:
        if not f:
            return 1, [ring.zero] * len(coeffs)
        raise NotACoverError("generators span the zero ideal")
    t, ft = 1, f
    limit = 1 + max((e for _, e in ring.factor(g)), default=0)
    while not divides(ring, g, ft):
        t += 1
        if t > limit:
            raise NotACoverError(f"no power of {ring.fmt(f)} lies in ({ring.fmt(g)})")
        ft = ft * f
    q = exact_div(ring, ft, g)
    return t, [q * c for c in coeffs]


def finite_subcover(U: OpenSet, cover: Sequence[OpenSet]):
    """Greedy minimal subcover plus a certificate ``a^t = Σ c_i a_i``.

    Returns ``(indices, t, coeffs)`` where ``coeffs`` align with ``indices``.
    """
    for V in cover:
        U._check(V)
    ring = U.ambient.ring
    if U.is_empty():
        return [], 1, []

    def covers(idx):
        g = ring.zero
        for i in idx:
            g = gcd(ring, g, cover[i].gen)
        return divides(ring, radical(g, ring), U.gen) if g else False

    idx = list(range(len(cover)))
    if not covers(idx):
        raise NotACoverError(f"{U} is not covered")
    for i in list(idx):
        trial = [j for j in idx if j != i]
        if trial and covers(trial):
            idx = trial
    t, coeffs = power_bezout(ring, U.gen, [cover[i].gen for i in idx])
    return idx, t, coeffs


def prime_label(P: PrimeSubmodule, name: str = "M") -> str:
    """Short name: ``pM``, ``T(M)``, the free summand ``Z ⊕ 0`` or a generator list."""
    M = P.ambient
    ring = M.ring
    if not P.prime.is_zero() and P.sub == scalar_submodule(M, P.prime.gen):
        return f"{ring.fmt_factor(P.prime.gen)}{name}"
    if P.prime.is_zero() and P.sub == torsion_submodule(M):
        return f"T({name})"
    if M.rank and M.factors:
        free = [g for d, g in zip(M.components, M.component_generators()) if not d]
        if P.sub == Submodule(M, free):
            return format_invariants(ring, M.rank, ()) + " ⊕ 0"
    return str(P.sub)

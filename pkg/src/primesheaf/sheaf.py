"""Sections of the sheaf ``A(N, M)`` on ``Spec(M)``.

For a faithful module ``M`` over a PID the sections over a basic open
``D(a)`` are the localization ``N_a``, so a section is stored as a single
fraction ``m / a^k`` with ``m ∈ N``.  Fractions are kept in a canonical form
(computed on the Smith decomposition of ``N``) so structural equality of
:class:`Section` objects is equality in ``N_a``; :func:`section_eq` decides the
same question from the torsion criterion alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from .errors import (
    AmbientMismatchError,
    IncompatibleSectionsError,
    NotACoverError,
    PreconditionError,
)
from .fgmod import (
    Element,
    FgModule,
    LocalizedModule,
    ModuleHom,
    Submodule,
    colon,
    localize,
    localize_at_prime,
    torsion_exponent,
    torsion_gamma,
)
from .ring_core import PrincipalIdeal, _xgcd, coprime_part, divides, exact_div, gcd, radical
from .spectrum import (
    OpenSet,
    PrimeSubmodule,
    finite_subcover,
    is_prime,
    open_intersect,
    open_subset,
    power_bezout,
)


@dataclass(frozen=True)
class Section:
    """The element ``num / inverted^exp`` of ``N_inverted`` in canonical form."""

    module: FgModule = field(compare=False, repr=False)
    inverted: object
    num: tuple
    exp: int
    coords: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __str__(self):
        return format_section(self)


@dataclass(frozen=True)
class SectionModule:
    source: FgModule
    open: OpenSet
    invariants: LocalizedModule

    def is_zero(self) -> bool:
        return self.invariants.is_zero()

    def __str__(self):
        return str(self.invariants)


@dataclass(frozen=True)
class StalkDescriptor:
    prime_submodule: PrimeSubmodule
    prime: PrincipalIdeal
    invariants: LocalizedModule

    def __str__(self):
        return str(self.invariants)


def format_section(s: Section) -> str:
    from .fgmod import format_vector

    ring = s.module.ring
    num = format_vector(ring, s.num)
    if s.exp == 0:
        return num
    den = s.inverted ** s.exp
    return f"{num}/{ring.fmt_factor(den)}"


# ---------------------------------------------------------------------------
# canonical form


def _inverse_mod(ring, a, d):
    g, u, _ = _xgcd(ring, a, d)
    if g != ring.one:
        raise ArithmeticError("element is not invertible")
    return ring.divmod(u, d)[1]


_texp = lru_cache(maxsize=4096)(torsion_exponent)
_subcover = lru_cache(maxsize=1024)(lambda U, opens: finite_subcover(U, list(opens)))
_bezout = lru_cache(maxsize=1024)(lambda ring, f, ks: power_bezout(ring, f, list(ks)))


@lru_cache(maxsize=4096)
def _plan(N: FgModule, a):
    """Per-component data for ``N_a``: ``None`` for free parts, else ``(d', a^-1 mod d', lift)``.

    ``lift`` is the idempotent ``e mod d`` with ``e = 1 mod d'`` and ``e = 0`` on
    the ``a``-part of ``d``; ``d' = 1`` marks a component killed by inverting ``a``.
    """
    ring = N.ring
    out = []
    for d in N.components:
        if not d:
            out.append(None)
            continue
        dp = coprime_part(ring, d, a)
        if ring.is_unit(dp):
            out.append((ring.one, ring.zero, ring.zero))
            continue
        g = exact_div(ring, d, dp)
        lift = ring.divmod(g * _inverse_mod(ring, g, dp), d)[1] if not ring.is_unit(g) else ring.one
        out.append((dp, _inverse_mod(ring, a, dp), lift))
    return tuple(out)


def canonical(N: FgModule, a, num, k: int) -> Section:
    """Canonical representative of ``num / a^k`` in ``N_a`` (``a`` squarefree)."""
    ring = N.ring
    a = ring.canonical(a)
    num = N.reduce(num)
    if ring.is_unit(a):
        return Section(N, a, num, 0)
    return _canonical_coords(N, a, N.coords(num), k)


def _canonical_coords(N: FgModule, a, ys, k: int) -> Section:
    ring = N.ring
    plan = _plan(N, a)
    # free parts: strip common powers of a
    free = {}
    for j, (y, step) in enumerate(zip(ys, plan)):
        if step is not None:
            continue
        e = k
        while e > 0 and y and divides(ring, a, y):
            y = exact_div(ring, y, a)
            e -= 1
        free[j] = (y, e if y else 0)
    K = max((e for _, e in free.values()), default=0)
    out = []
    dm = ring.divmod
    for j, (y, step) in enumerate(zip(ys, plan)):
        if step is None:
            y, e = free[j]
            out.append(y * a ** (K - e))
            continue
        dp, inv, lift = step
        if not lift or not y:
            out.append(ring.zero)
            continue
        v = dm(y * inv ** k * a ** K, dp)[1]
        out.append(v if lift == ring.one else dm(v * lift, N.components[j])[1])
    out = tuple(out)
    return Section(N, a, N.from_coords(out), K, out)


def make_section(N: FgModule, a, num, k: int = 0) -> Section:
    ring = N.ring
    a = ring.coerce(a)
    if not a:
        raise PreconditionError("sections over the empty open form the zero module")
    if isinstance(num, Element):
        num = num.vec
    return canonical(N, radical(a, ring), num, k)


def zero_section(N: FgModule, a) -> Section:
    return make_section(N, a, N.zero().vec, 0)


# ---------------------------------------------------------------------------
# hypotheses


def _require_faithful(U: OpenSet):
    if U.ambient.rank < 1:
        raise PreconditionError("the ambient module must be faithful (rank >= 1)")


def _require_nonempty(U: OpenSet):
    if U.is_empty():
        raise PreconditionError("the open set is empty")


def sections(N: FgModule, M: FgModule, U: OpenSet) -> SectionModule:
    """``A(N, M)(U) ≅ N_a`` where ``a`` generates ``U``."""
    if U.ambient != M:
        raise AmbientMismatchError("open set of a different spectrum")
    _require_faithful(U)
    _require_nonempty(U)
    return SectionModule(N, U, localize(N, U.gen))


def epsilon(N: FgModule, U: OpenSet, m) -> Section:
    """``m ↦ m/1``."""
    _require_nonempty(U)
    return make_section(N, U.gen, m, 0)


def epsilon_kernel(N: FgModule, U: OpenSet) -> Submodule:
    _require_faithful(U)
    _require_nonempty(U)
    return torsion_gamma(N, U.gen)


# ---------------------------------------------------------------------------
# arithmetic


def _same(s: Section, t: Section):
    if s.module != t.module or s.inverted != t.inverted:
        raise AmbientMismatchError("sections of different modules or opens")


def section_eq(s: Section, t: Section) -> bool:
    """Equality from the criterion ``a^h (a^kt m_s - a^ks m_t) = 0`` in ``N``."""
    _same(s, t)
    N, a = s.module, s.inverted
    ring = N.ring
    if ring.is_unit(a):
        return N.reduce(s.num) == N.reduce(t.num)
    h = _texp(N, a)
    diff = tuple(a ** t.exp * x - a ** s.exp * y for x, y in zip(s.num, t.num))
    return not any(N.reduce(tuple(a ** h * x for x in diff)))


def section_add(s: Section, t: Section) -> Section:
    _same(s, t)
    a = s.inverted
    num = tuple(a ** t.exp * x + a ** s.exp * y for x, y in zip(s.num, t.num))
    return canonical(s.module, a, num, s.exp + t.exp)


def section_neg(s: Section) -> Section:
    return canonical(s.module, s.inverted, tuple(-x for x in s.num), s.exp)


def section_sub(s: Section, t: Section) -> Section:
    return section_add(s, section_neg(t))


def section_scale(r, s: Section) -> Section:
    r = s.module.ring.coerce(r)
    return canonical(s.module, s.inverted, tuple(r * x for x in s.num), s.exp)


def is_zero_section(s: Section) -> bool:
    return not any(s.num)


# ---------------------------------------------------------------------------
# restriction


def restrict(s: Section, U: OpenSet, V: OpenSet) -> Section:
    """``ρ_{UV}``: rewrite ``m/a^k`` over the smaller open ``V = D(b)``."""
    if s.inverted != U.gen:
        raise AmbientMismatchError("section is not defined over this open")
    _require_nonempty(V)
    if not open_subset(V, U):
        raise PreconditionError(f"{V} is not contained in {U}")
    ring = s.module.ring
    a, b = U.gen, V.gen
    t, bt = 1, b
    while not divides(ring, a, bt):
        t, bt = t + 1, bt * b
    c = exact_div(ring, bt, a)
    num = tuple(c ** s.exp * x for x in s.num)
    return canonical(s.module, b, num, t * s.exp)


def in_restriction_kernel(s: Section, W: OpenSet, U: OpenSet) -> bool:
    """True iff some power of ``U``'s generator kills ``s`` in ``A(N,M)(W)``."""
    if not open_subset(U, W):
        raise PreconditionError(f"{U} is not contained in {W}")
    N = s.module
    b = U.gen
    a = s.inverted
    kill = b ** torsion_exponent(N, b) * a ** torsion_exponent(N, a)
    return not any(N.reduce(tuple(kill * x for x in s.num)))


def coker_witness(s: Section, U: Optional[OpenSet] = None):
    """Minimal ``h`` and ``m`` with ``a^h s = ε(m)``."""
    a = s.inverted
    for h in range(s.exp + 1):
        t = section_scale(a ** h, s)
        if t.exp == 0:
            return h, t.num
    raise AssertionError("unreachable: a^k s is always a global element")


# ---------------------------------------------------------------------------
# gluing


def _kill_exponent(N: FgModule, c, ys) -> Optional[int]:
    """Least ``n`` with ``c^n y = 0`` for the Smith coordinates ``ys``, or ``None``."""
    ring = N.ring
    n = 0
    for d, y in zip(N.components, ys):
        if not y:
            continue
        if not d:
            return None
        g = gcd(ring, d, y)
        if g == d:
            continue
        # order of y is q = d / gcd(d, y); count steps q -> q / gcd(q, c) down to a unit
        q = exact_div(ring, d, g)
        steps = 0
        while not ring.is_unit(q):
            g = gcd(ring, q, c)
            if ring.is_unit(g):
                return None
            q = exact_div(ring, q, g)
            steps += 1
        if steps > n:
            n = steps
    return n


def _pair_exponent(N: FgModule, ki, kj, ci, cj) -> Optional[int]:
    """Least ``n`` with ``(k_i k_j)^n (k_j b_i - k_i b_j) = 0`` in ``N``, else ``None``.

    ``ci``, ``cj`` are the Smith coordinates of ``b_i``, ``b_j``.  Such an ``n``
    exists exactly when ``b_i/k_i`` and ``b_j/k_j`` agree on ``D(k_i k_j)``, so
    this doubles as the compatibility test.
    """
    return _kill_exponent(N, ki * kj, [kj * x - ki * y for x, y in zip(ci, cj)])


@lru_cache(maxsize=1024)
def _cover_plan(U: OpenSet, opens: tuple):
    for V in opens:
        if not open_subset(V, U):
            raise PreconditionError(f"{V} is not contained in {U}")
    return _subcover(U, opens)[0]


def glue(assignments: Sequence, U: OpenSet) -> Section:
    """Glue compatible local sections over a cover of ``U`` by basic opens.

    Follows the constructive argument: rewrite each piece as ``b_i/k_i`` with
    ``D(k_i)`` its open, find a common exponent ``m`` so that
    ``k_j^(m+1) (k_i^m b_i) = k_i^(m+1) (k_j^m b_j)`` holds exactly in ``N``,
    then combine with a Bézout identity ``f^t = Σ c_i k_i^(m+1)``.
    Everything after the input checks runs on Smith coordinates.
    """
    _require_faithful(U)
    pieces = [(V, s) for V, s in assignments if not V.is_empty()]
    if U.is_empty():
        raise PreconditionError("the open set is empty")
    if not pieces:
        raise NotACoverError(f"{U} is not covered")
    N = pieces[0][1].module
    ring = N.ring
    for V, s in pieces:
        if s.module != N:
            raise AmbientMismatchError("sections of different modules")
        if s.inverted != V.gen:
            raise AmbientMismatchError("section is not defined over its open")
    idx = _cover_plan(U, tuple(V for V, _ in pieces))

    ks, cs = [], []
    for V, s in pieces:
        e = s.exp if s.exp else 1
        ks.append(V.gen ** e)
        ys = s.coords if s.coords is not None else N.coords(s.num)
        cs.append(ys if e == s.exp else [V.gen * y for y in ys])
    m = 0
    n_p = len(pieces)
    for i in range(n_p):
        for j in range(i + 1, n_p):
            n = _pair_exponent(N, ks[i], ks[j], cs[i], cs[j])
            if n is None:
                W = open_intersect(pieces[i][0], pieces[j][0])
                raise IncompatibleSectionsError(
                    f"sections over {pieces[i][0]} and {pieces[j][0]} disagree on {W}", pair=(i, j))
            if n > m and i in idx and j in idx:
                m = n
    t, coeffs = _bezout(ring, U.gen, tuple(ks[i] ** (m + 1) for i in idx))
    total = [ring.zero] * len(N.components)
    for c, i in zip(coeffs, idx):
        w = c * ks[i] ** m
        total = [x + w * y for x, y in zip(total, cs[i])]
    a = ring.canonical(U.gen)
    if ring.is_unit(a):
        return canonical(N, a, N.from_coords(total), 0)
    return _canonical_coords(N, a, total, t)


# ---------------------------------------------------------------------------
# stalks, functoriality, ideal transforms


def stalk(N: FgModule, M: FgModule, P) -> StalkDescriptor:
    """``A(N,M)_P ≅ N_p`` with ``p = (P:M)``."""
    sub = P.sub if isinstance(P, PrimeSubmodule) else P
    p = is_prime(sub, M)
    if p is None:
        raise PreconditionError("not a prime submodule")
    return StalkDescriptor(PrimeSubmodule(sub, p), p, localize_at_prime(N, p))


def section_map(h: ModuleHom, U: OpenSet, s: Section) -> Section:
    """``A(h, M)(U)``: apply ``h`` to the numerator."""
    if h.source != s.module:
        raise AmbientMismatchError("homomorphism source does not match the section")
    if s.inverted != U.gen:
        raise AmbientMismatchError("section is not defined over this open")
    return canonical(h.target, s.inverted, h(s.num).vec, s.exp)


def ideal_transform(N: FgModule, I) -> LocalizedModule:
    """``D_I(N)`` realized as ``N_a`` for ``I = (a)``."""
    I = I if isinstance(I, PrincipalIdeal) else PrincipalIdeal(N.ring, I)
    if I.is_zero():
        raise PreconditionError("the ideal transform needs a nonzero ideal")
    return localize(N, I.gen)


def transform_coordinates(N: FgModule, a, num, k: int) -> tuple:
    """Coordinates of ``num / a^k`` in ``R_a^r ⊕ ⊕ R/(d_i')``.

    Free coordinates are reduced pairs ``(y, e)`` meaning ``y/a^e``; torsion
    coordinates are residues modulo the part of ``d_i`` coprime to ``a``.
    """
    ring = N.ring
    a = radical(ring.coerce(a), ring)
    out = []
    for d, y in zip(N.components, N.coords(N.reduce(num))):
        if not d:
            e = k
            while e and y and divides(ring, a, y):
                y, e = exact_div(ring, y, a), e - 1
            out.append((y, e if y else 0))
        else:
            dp = coprime_part(ring, d, a)
            if ring.is_unit(dp):
                continue
            out.append(ring.divmod(y * _inverse_mod(ring, a, dp) ** k, dp)[1])
    return tuple(out)


def transform_map(s: Section) -> tuple:
    """``f_{K,N}``: a section to its coordinates in ``D_(a)(N) = N_a``."""
    return transform_coordinates(s.module, s.inverted, s.num, s.exp)


def eta(N: FgModule, I, m) -> tuple:
    """``η: N -> D_I(N)`` read directly off the Smith coordinates of ``m``."""
    I = I if isinstance(I, PrincipalIdeal) else PrincipalIdeal(N.ring, I)
    if I.is_zero():
        raise PreconditionError("the ideal transform needs a nonzero ideal")
    ring = N.ring
    a = radical(I.gen, ring)
    vec = m.vec if isinstance(m, Element) else N.reduce(m)
    out = []
    for d, y in zip(N.components, N.coords(vec)):
        if not d:
            out.append((y, 0))
        else:
            dp = coprime_part(ring, d, a)
            if not ring.is_unit(dp):
                out.append(ring.divmod(y, dp)[1])
    return tuple(out)


def normalize_denominator(s: Section, K):
    """Rewrite ``s`` with a denominator lying in ``(K:M)``.

    ``K`` may be a submodule (its colon ideal is used) or an ideal generator.
    Returns ``(denominator, numerator)``.
    """
    N = s.module
    ring = N.ring
    if isinstance(K, Submodule):
        d = colon(K, K.ambient).gen
    elif isinstance(K, PrincipalIdeal):
        d = K.gen
    else:
        d = ring.canonical(ring.coerce(K))
    if radical(d, ring) != s.inverted:
        raise PreconditionError("the section is not defined over X \\ V(K)")
    den = s.inverted ** s.exp
    g, _, _ = _xgcd(ring, den, d)
    c = exact_div(ring, d, g)
    return ring.canonical(den * c), N.reduce(tuple(c * x for x in s.num))

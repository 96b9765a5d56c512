"""Finitely generated modules over a Euclidean base ring.

A module is given by a presentation ``R^g / L`` where ``L`` is the row
lattice of the relation matrix.  On construction we compute

* the Hermite basis of ``L``, which gives every element a unique canonical
  residue (so element equality is tuple equality), and
* a Smith decomposition ``M ≅ R/(d_1) ⊕ … ⊕ R/(d_k) ⊕ R^r`` together with
  the coordinate change into it.

Most module-theoretic questions are then answered componentwise on the Smith
decomposition, which is what makes torsion functors and localizations cheap.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import AmbientMismatchError, PreconditionError
from .normal_forms import hermite_form, reduce_vector, smith_normal_form
from .ring_core import (
    ZZ,
    PrincipalIdeal,
    coprime_part,
    exact_div,
    gcd,
    max_exponent,
    radical,
    supported_part,
)


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_scale(r, a):
    return tuple(r * x for x in a)


class FgModule:
    """The module ``R^ngens / rowspan(relations)``."""

    def __init__(self, ring, ngens: int, relations: Sequence[Sequence] = ()):
        if ngens < 0:
            raise ValueError("generator count must be nonnegative")
        rels = []
        for row in relations:
            if len(row) != ngens:
                raise ValueError(f"relation {list(row)} does not have {ngens} entries")
            rels.append(tuple(ring.coerce(x) for x in row))
        self.ring = ring
        self.ngens = ngens
        self.relations = tuple(rels)
        basis, pivots = hermite_form(ring, self.relations, ngens)
        self._hnf = tuple(tuple(r) for r in basis)
        self._hash = hash((ring, ngens, self._hnf))
        self._pivots = tuple(pivots)

        D, _, V, Vi = smith_normal_form(ring, [list(r) for r in self._hnf], ngens)
        diag = [D[j][j] if j < len(D) else ring.zero for j in range(ngens)]
        comps = []
        for j, d in enumerate(diag):
            d = ring.canonical(d)
            if d and ring.is_unit(d):
                continue
            col = tuple(V[i][j] for i in range(ngens))
            gen = reduce_vector(ring, Vi[j], basis, pivots)
            if d:
                col = tuple(x % d for x in col)
            comps.append((d, col, gen))
        # torsion components (chain order) then free ones
        self._comps = tuple(comps)
        self._components = tuple(d for d, _, _ in self._comps)
        self.factors = tuple(d for d, _, _ in comps if d)
        self.rank = sum(1 for d, _, _ in comps if not d)

    # -- constructors ------------------------------------------------------
    @classmethod
    def free(cls, ring, r: int) -> "FgModule":
        return cls(ring, r, ())

    @classmethod
    def cyclic(cls, ring, d) -> "FgModule":
        return cls(ring, 1, [(d,)] if d else [])

    @classmethod
    def direct_sum(cls, ring, orders: Sequence, rank: int = 0) -> "FgModule":
        """``R/(n_1) ⊕ … ⊕ R/(n_s) ⊕ R^rank`` with a diagonal presentation."""
        g = len(orders) + rank
        rels = []
        for i, n in enumerate(orders):
            if n:
                row = [ring.zero] * g
                row[i] = ring.coerce(n)
                rels.append(row)
        return cls(ring, g, rels)

    # -- invariants --------------------------------------------------------
    def invariants(self):
        return self.rank, self.factors

    @property
    def components(self):
        """Orders of the Smith components: torsion factors then zeros."""
        return self._components

    def is_zero(self) -> bool:
        return not self._comps

    def is_torsion(self) -> bool:
        return self.rank == 0

    def is_cyclic(self) -> bool:
        return len(self._comps) <= 1

    def order(self) -> Optional[int]:
        """Number of elements, or ``None`` if the module is infinite."""
        if self.rank:
            return None
        n = 1
        for d in self.factors:
            n *= self.ring.residue_count(d)
        return n

    def exponent(self):
        """Generator of the annihilator."""
        if self.rank:
            return self.ring.zero
        return self.factors[-1] if self.factors else self.ring.one

    # -- elements ----------------------------------------------------------
    def reduce(self, vec) -> tuple:
        if len(vec) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(vec)}")
        coerce = self.ring.coerce
        vec = tuple(map(coerce, vec))
        if not self._hnf:
            return vec
        return reduce_vector(self.ring, vec, self._hnf, self._pivots)

    def element(self, vec) -> "Element":
        return Element(self, self.reduce(vec))

    def zero(self) -> "Element":
        return Element(self, (self.ring.zero,) * self.ngens)

    def generators(self) -> list["Element"]:
        out = []
        for i in range(self.ngens):
            v = [self.ring.zero] * self.ngens
            v[i] = self.ring.one
            out.append(self.element(v))
        return out

    def coords(self, vec) -> tuple:
        """Coordinates in the Smith decomposition (torsion parts reduced)."""
        out = []
        ring = self.ring
        for d, col, _ in self._comps:
            y = ring.zero
            for x, c in zip(vec, col):
                if x and c:
                    y = y + x * c
            if d:
                y = ring.divmod(y, d)[1]
            out.append(y)
        return tuple(out)

    def from_coords(self, ys) -> tuple:
        v = [self.ring.zero] * self.ngens
        for y, (_, _, gen) in zip(ys, self._comps):
            if y:
                for i, g in enumerate(gen):
                    if g:
                        v[i] = v[i] + y * g
        return reduce_vector(self.ring, v, self._hnf, self._pivots)

    def component_generators(self) -> list[tuple]:
        return [gen for _, _, gen in self._comps]

    def elements(self) -> Iterator["Element"]:
        """Every element of a finite module, in a fixed order."""
        if self.rank:
            raise PreconditionError("cannot enumerate an infinite module")
        ranges = [list(self.ring.residues(d)) for d in self.factors]
        for ys in itertools.product(*ranges):
            yield Element(self, self.from_coords(ys))

    # -- equality / text ---------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FgModule):
            return NotImplemented
        return (self.ring == other.ring and self.ngens == other.ngens
                and self._hnf == other._hnf)

    def __hash__(self):
        return self._hash

    def isomorphic(self, other: "FgModule") -> bool:
        return self.ring == other.ring and self.invariants() == other.invariants()

    def __repr__(self):
        return f"FgModule({self.ring.name}, {self.ngens}, {[list(r) for r in self.relations]})"

    def __str__(self):
        return format_invariants(self.ring, self.rank, self.factors)


@dataclass(frozen=True)
class Element:
    """Element of an :class:`FgModule`, stored as its canonical residue."""

    module: FgModule = field(compare=False, hash=False, repr=False)
    vec: tuple

    def __add__(self, other: "Element") -> "Element":
        return Element(self.module, self.module.reduce(_vec_add(self.vec, other.vec)))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.module, self.module.reduce(tuple(-x for x in self.vec)))

    def __rmul__(self, r) -> "Element":
        r = self.module.ring.coerce(r)
        return Element(self.module, self.module.reduce(_vec_scale(r, self.vec)))

    def is_zero(self) -> bool:
        return not any(self.vec)

    def coords(self) -> tuple:
        return self.module.coords(self.vec)

    def __str__(self):
        return format_vector(self.module.ring, self.vec)


def format_vector(ring, vec) -> str:
    if len(vec) == 1:
        return ring.fmt(vec[0])
    return "(" + ", ".join(ring.fmt(x) for x in vec) + ")"


# ---------------------------------------------------------------------------
# Submodules.


class Submodule:
    """Submodule of ``ambient`` generated by ``gens`` (coordinate tuples)."""

    def __init__(self, ambient: FgModule, gens: Sequence = ()):
        self.ambient = ambient
        ring = ambient.ring
        gs = []
        for g in gens:
            if isinstance(g, Element):
                g = g.vec
            gs.append(ambient.reduce(g))
        self.gens = tuple(g for g in gs if any(g))
        basis, pivots = hermite_form(ring, list(self.gens) + list(ambient.relations), ambient.ngens)
        self._basis = tuple(tuple(r) for r in basis)
        self._pivots = tuple(pivots)

    @classmethod
    def whole(cls, M: FgModule) -> "Submodule":
        return cls(M, [g.vec for g in M.generators()])

    @classmethod
    def zero(cls, M: FgModule) -> "Submodule":
        return cls(M, ())

    @property
    def basis(self):
        return self._basis

    def contains(self, x) -> bool:
        if isinstance(x, Element):
            x = x.vec
        r = reduce_vector(self.ambient.ring, tuple(x), self._basis, self._pivots)
        return not any(r)

    def __contains__(self, x):
        return self.contains(x)

    def _check(self, other):
        if self.ambient != other.ambient:
            raise AmbientMismatchError("submodules of different ambient modules")

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ambient == other.ambient and self._basis == other._basis

    def __hash__(self):
        return hash((self.ambient, self._basis))

    def __le__(self, other: "Submodule") -> bool:
        self._check(other)
        return all(other.contains(g) for g in self.gens)

    def is_whole(self) -> bool:
        return all(self.contains(g.vec) for g in self.ambient.generators())

    def is_zero(self) -> bool:
        return not self.gens

    def as_module(self) -> FgModule:
        """Abstract module isomorphic to this submodule."""
        return submodule_as_module(self)

    def quotient(self) -> FgModule:
        return FgModule(self.ambient.ring, self.ambient.ngens, self._basis)

    def scale(self, r) -> "Submodule":
        r = self.ambient.ring.coerce(r)
        return Submodule(self.ambient, [_vec_scale(r, g) for g in self.gens])

    def elements(self):
        """Elements of a finite submodule, as canonical vectors."""
        return [x for x in self.ambient.elements() if self.contains(x.vec)]

    def __repr__(self):
        return f"Submodule(gens={[list(g) for g in self.gens]})"

    def __str__(self):
        ring = self.ambient.ring
        rel = set(self.ambient._hnf)
        rows = [r for r in self._basis if r not in rel]
        if not rows:
            return "0"
        return "<" + ", ".join(format_vector(ring, r) for r in rows) + ">"



def sub_sum(A: Submodule, B: Submodule) -> Submodule:
    A._check(B)
    return Submodule(A.ambient, list(A.gens) + list(B.gens))


def sub_intersect(A: Submodule, B: Submodule) -> Submodule:
    """Intersection via the lattice trick on ``[[A, A], [B, 0]]``."""
    A._check(B)
    ring = A.ambient.ring
    g = A.ambient.ngens
    zero = (ring.zero,) * g
    rows = [tuple(r) + tuple(r) for r in A._basis] + [tuple(r) + zero for r in B._basis]
    basis, pivots = hermite_form(ring, rows, 2 * g)
    gens = [r[g:] for r, c in zip(basis, pivots) if c >= g]
    return Submodule(A.ambient, gens)


def sub_equal(A: Submodule, B: Submodule) -> bool:
    A._check(B)
    return A == B


def contains(N: Submodule, x) -> bool:
    return N.contains(x)


def quotient(M: FgModule, N: Submodule) -> FgModule:
    if N.ambient != M:
        raise AmbientMismatchError("submodule does not live in this module")
    return N.quotient()


def scalar_submodule(M: FgModule, r) -> Submodule:
    """The submodule ``rM``."""
    r = M.ring.coerce(r)
    return Submodule(M, [_vec_scale(r, g.vec) for g in M.generators()])


def submodule_as_module(N: Submodule) -> FgModule:
    """Presentation of ``N`` as an abstract module.

    Generators are the Hermite basis rows that are not relations; the relation
    module is the kernel of ``R^s -> M``.
    """
    M = N.ambient
    ring = M.ring
    gens = [tuple(g) for g in N.gens]
    s = len(gens)
    if s == 0:
        return FgModule(ring, 0, ())
    # kernel of (c_1..c_s, r_1..r_t) -> sum c_i gen_i + sum r_j rel_j (= 0 in R^g)
    g = M.ngens
    rels = [tuple(r) for r in M._hnf]
    ident = [[ring.one if i == j else ring.zero for j in range(s)] for i in range(s)]
    rows = []
    for i, v in enumerate(gens):
        rows.append(tuple(v) + tuple(ident[i]))
    for r in rels:
        rows.append(tuple(r) + (ring.zero,) * s)
    basis, pivots = hermite_form(ring, rows, g + s)
    kernel = [r[g:] for r, c in zip(basis, pivots) if c >= g]
    return FgModule(ring, s, kernel)


# ---------------------------------------------------------------------------
# Ideals attached to modules.


def annihilator(M: FgModule) -> PrincipalIdeal:
    return PrincipalIdeal(M.ring, M.exponent())


def colon(N: Submodule, M: FgModule) -> PrincipalIdeal:
    """``(N : M) = {r : rM ⊆ N} = Ann(M/N)``."""
    return annihilator(quotient(M, N))


def _ideal(M: FgModule, I):
    if isinstance(I, PrincipalIdeal):
        return I
    return PrincipalIdeal(M.ring, I)


def torsion_gamma(N: FgModule, I) -> Submodule:
    """The ``I``-torsion submodule: elements killed by a power of ``I``."""
    I = _ideal(N, I)
    ring = N.ring
    a = I.gen
    if not a:
        return Submodule.whole(N)
    gens = []
    for d, _, gen in N._comps:
        if not d:
            continue
        g = supported_part(ring, d, a)
        if not ring.is_unit(g):
            gens.append(_vec_scale(exact_div(ring, d, g), gen))
    return Submodule(N, gens)


def torsion_submodule(M: FgModule) -> Submodule:
    """``T(M)``: elements with nonzero annihilator."""
    return Submodule(M, [gen for d, _, gen in M._comps if d])


def torsion_exponent(M: FgModule, a) -> int:
    """Smallest ``h`` with ``a^h Γ_(a)(M) = 0`` for squarefree-enough ``a``."""
    return max((max_exponent(M.ring, d, a) for d in M.factors), default=0)


# ---------------------------------------------------------------------------
# Homomorphisms.


class ModuleHom:
    """Homomorphism given by the images of the source generators."""

    def __init__(self, source: FgModule, target: FgModule, images: Sequence, check: bool = True):
        if len(images) != source.ngens:
            raise ValueError("one image per source generator is required")
        self.source = source
        self.target = target
        self.images = tuple(target.reduce(v.vec if isinstance(v, Element) else v) for v in images)
        if check and not self.is_well_defined():
            raise PreconditionError("a source relation does not map to zero")

    def _apply_vec(self, vec) -> tuple:
        ring = self.target.ring
        out = (ring.zero,) * self.target.ngens
        for x, img in zip(vec, self.images):
            if x:
                out = _vec_add(out, _vec_scale(x, img))
        return self.target.reduce(out)

    def __call__(self, x):
        if isinstance(x, Element):
            x = x.vec
        return Element(self.target, self._apply_vec(x))

    def is_well_defined(self) -> bool:
        return all(not any(self._apply_vec(r)) for r in self.source.relations)

    def compose(self, first: "ModuleHom") -> "ModuleHom":
        """``self ∘ first``."""
        if first.target != self.source:
            raise AmbientMismatchError("composition of non-matching homomorphisms")
        return ModuleHom(first.source, self.target, [self._apply_vec(v) for v in first.images], check=False)

    @classmethod
    def identity(cls, M: FgModule) -> "ModuleHom":
        return cls(M, M, [g.vec for g in M.generators()], check=False)

    @classmethod
    def zero_map(cls, source: FgModule, target: FgModule) -> "ModuleHom":
        return cls(source, target, [target.zero().vec] * source.ngens, check=False)


# ---------------------------------------------------------------------------
# Localizations.


@dataclass(frozen=True)
class LocalizedModule:
    """Isomorphism type of a localization ``N_a`` or ``N_p``.

    Exactly one of ``inverted`` (a squarefree element) and ``prime`` (a prime
    ideal) is set.  Stored torsion factors are nonunits in chain order.
    """

    ring: object
    rank: int
    torsion: tuple
    inverted: object = None
    prime: Optional[PrincipalIdeal] = None

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def invariants(self):
        return self.rank, self.torsion

    def same_type(self, other: "LocalizedModule") -> bool:
        return self.ring == other.ring and self.invariants() == other.invariants()

    def __str__(self):
        if self.prime is not None:
            return format_invariants(self.ring, self.rank, self.torsion, free=_local_ring_name(self.ring, self.prime))
        text = format_invariants(self.ring, self.rank, self.torsion)
        if self.is_zero() or self.ring.is_unit(self.inverted):
            return text
        return f"{text} (inverting {self.ring.fmt(self.inverted)})"


def _local_ring_name(ring, p: PrincipalIdeal) -> str:
    if p.is_zero():
        return "Q" if ring == ZZ else f"F{ring.p}(x)"
    return f"{ring.name}_({ring.fmt(p.gen)})"


def localize(N: FgModule, a) -> LocalizedModule:
    """Invariants of ``N_a``: rank kept, torsion reduced to its part coprime to ``a``."""
    ring = N.ring
    a = ring.coerce(a)
    if not a:
        raise PreconditionError("cannot invert zero")
    a = radical(a, ring)
    torsion = []
    for d in N.factors:
        c = coprime_part(ring, d, a)
        if not ring.is_unit(c):
            torsion.append(c)
    return LocalizedModule(ring, N.rank, tuple(torsion), inverted=a)


def relocalize(L: LocalizedModule, a=None) -> LocalizedModule:
    """Localize an already-localized module again (default: same element)."""
    ring = L.ring
    a = L.inverted if a is None else radical(ring.coerce(a), ring)
    torsion = tuple(c for c in (coprime_part(ring, d, a) for d in L.torsion) if not ring.is_unit(c))
    return LocalizedModule(ring, L.rank, torsion, inverted=a)


def localize_at_prime(N: FgModule, p) -> LocalizedModule:
    p = _ideal(N, p)
    if not p.is_prime():
        raise PreconditionError(f"{p} is not a prime ideal")
    ring = N.ring
    if p.is_zero():
        return LocalizedModule(ring, N.rank, (), prime=p)
    torsion = []
    for d in N.factors:
        s = supported_part(ring, d, p.gen)
        if not ring.is_unit(s):
            torsion.append(s)
    return LocalizedModule(ring, N.rank, tuple(torsion), prime=p)


def is_regular_element(a, N: FgModule) -> bool:
    """True iff multiplication by ``a`` is injective on ``N``."""
    ring = N.ring
    a = ring.coerce(a)
    if N.is_zero():
        return True
    if not a:
        return False
    return all(ring.is_unit(gcd(ring, a, d)) for d in N.factors)


def is_regular_sequence2(a1, a2, N: FgModule) -> bool:
    if not is_regular_element(a1, N):
        return False
    Q1 = quotient(N, scalar_submodule(N, a1))
    if not is_regular_element(a2, Q1):
        return False
    Q2 = quotient(N, sub_sum(scalar_submodule(N, a1), scalar_submodule(N, a2)))
    return not Q2.is_zero()


# ---------------------------------------------------------------------------
# Canonical text form.

_SUM = " ⊕ "


def format_invariants(ring, rank: int, factors, free: Optional[str] = None) -> str:
    free = free or ring.name
    parts = []
    if rank == 1:
        parts.append(free)
    elif rank > 1:
        parts.append(f"{free}^{rank}")
    for d in factors:
        parts.append(f"{ring.name}/{ring.fmt_factor(d)}")
    return _SUM.join(parts) if parts else "0"


def parse_invariants(ring, text: str) -> FgModule:
    """Inverse of :func:`format_invariants` (for plain, unlocalized modules)."""
    text = text.strip()
    if text == "0":
        return FgModule(ring, 0)
    rank = 0
    factors = []
    name = re.escape(ring.name)
    for part in text.split("⊕"):
        part = part.strip()
        m = re.fullmatch(name + r"(?:\^(\d+))?", part)
        if m:
            rank += int(m.group(1)) if m.group(1) else 1
            continue
        m = re.fullmatch(name + r"/(.+)", part)
        if not m:
            raise ValueError(f"cannot parse module summand {part!r}")
        body = m.group(1).strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        factors.append(ring.parse(body))
    return FgModule.direct_sum(ring, factors, rank)

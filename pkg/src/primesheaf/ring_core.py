"""Euclidean base rings and principal-ideal algebra.

Two rings are supported: the integers (elements are plain Python ``int``) and
``F_p[x]`` for a small prime ``p`` (elements are :class:`Poly`).  Every ring
object exposes the same small surface so the module-theoretic layers can be
written once.

Canonical associates are nonnegative integers and monic (or zero)
polynomials, so ideal equality is a syntactic comparison of generators.
"""
from __future__ import annotations

import functools
import itertools
import re
from math import gcd as _math_gcd
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import MixedRingError


class Poly:
    """Polynomial over F_p, coefficients stored low degree first.

    Invariant: every coefficient lies in ``range(p)`` and the leading
    coefficient is nonzero (the zero polynomial has no coefficients).
    """

    __slots__ = ("p", "c")

    def __init__(self, coeffs, p: int):
        c = [int(x) % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c, p):
        obj = object.__new__(cls)
        obj.p = p
        obj.c = c
        return obj

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.p != self.p:
                raise MixedRingError(f"F_{self.p}[x] and F_{other.p}[x] mixed")
            return other
        if isinstance(other, int):
            return Poly((other,), self.p)
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == Poly((other,), self.p).c
        return NotImplemented

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.c[0] if self.c else 0)
        return hash((self.p, self.c))

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Poly(out, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c], self.p)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw((), self.p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = Poly((1,), self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv = pow(other.c[-1], -1, p)
        r = list(self.c)
        db = len(other.c) - 1
        q = [0] * max(len(r) - db, 0)
        for i in range(len(r) - 1, db - 1, -1):
            coef = r[i] * inv % p
            if coef:
                q[i - db] = coef
                for j, y in enumerate(other.c):
                    r[i - db + j] -= coef * y
        return Poly(q, p), Poly(r[:db] if db else [], p)

    def __rdivmod__(self, other):
        return divmod(self._lift(other), self)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __rfloordiv__(self, other):
        return divmod(self._lift(other), self)[0]

    def __rmod__(self, other):
        return divmod(self._lift(other), self)[1]

    def __repr__(self):
        return f"Poly({list(self.c)}, p={self.p})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Poly) -> str:
    if not f.c:
        return "0"
    terms = []
    for i in range(len(f.c) - 1, -1, -1):
        a = f.c[i]
        if not a:
            continue
        if i == 0:
            terms.append(str(a))
        else:
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if a == 1 else f"{a}*{mono}")
    return " + ".join(terms)


_TERM = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> Poly:
    """Parse forms such as ``x^2 + 4``, ``3*x + 1`` or ``-x+2``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    s = s.replace("-", "+-")
    coeffs: dict[int, int] = {}
    for tok in s.split("+"):
        if not tok:
            continue
        sign = 1
        while tok.startswith("-"):
            sign, tok = -sign, tok[1:]
        m = _TERM.match(tok)
        if not m or not tok:
            raise ValueError(f"bad polynomial term {tok!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        if m.group(2) is None:
            deg = 0
            if m.group(1) is None:
                raise ValueError(f"bad polynomial term {tok!r}")
        else:
            deg = int(m.group(3)) if m.group(3) else 1
        coeffs[deg] = coeffs.get(deg, 0) + sign * coef
    top = max(coeffs)
    return Poly([coeffs.get(i, 0) for i in range(top + 1)], p)


RingElem = Union[int, Poly]


class Integers:
    """The ring Z with arbitrary-precision elements."""

    name = "Z"
    kind = "integers"
    zero = 0
    one = 1

    def __repr__(self):
        return "Integers()"

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("Z")

    def owns(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool)

    def coerce(self, a) -> int:
        if type(a) is int:
            return a
        if isinstance(a, Poly) or isinstance(a, bool):
            raise MixedRingError(f"{a!r} is not an integer")
        return int(a)

    def canonical(self, a: int) -> int:
        return -a if a < 0 else a

    def normalizer(self, a: int) -> int:
        return -1 if a < 0 else 1

    def is_unit(self, a: int) -> bool:
        return a == 1 or a == -1

    def norm(self, a: int) -> int:
        return -a if a < 0 else a

    divmod = staticmethod(divmod)

    def residues(self, d: int) -> Iterator[int]:
        return iter(range(abs(d)))

    def residue_count(self, d: int) -> int:
        return abs(d)

    def sort_key(self, a: int):
        return abs(a)

    def fmt(self, a: int) -> str:
        return str(a)

    def fmt_factor(self, a: int) -> str:
        return str(a)

    def parse(self, text) -> int:
        if isinstance(text, int) and not isinstance(text, bool):
            return text
        return int(str(text).strip())

    def factor(self, a: int) -> list[tuple[int, int]]:
        if a == 0:
            raise ValueError("cannot factor zero")
        n = abs(a)
        out = []
        d = 2
        while d * d <= n:
            if n % d == 0:
                e = 0
                while n % d == 0:
                    n //= d
                    e += 1
                out.append((d, e))
            d += 1 if d == 2 else 2
        if n > 1:
            out.append((n, 1))
        return out

    def is_prime(self, a: int) -> bool:
        n = abs(a)
        if n < 2:
            return False
        if n < 4:
            return True
        if n % 2 == 0:
            return False
        d = 3
        while d * d <= n:
            if n % d == 0:
                return False
            d += 2
        return True

    def primes(self) -> Iterator[int]:
        """All primes in increasing order."""
        n = 2
        while True:
            if self.is_prime(n):
                yield n
            n += 1

    def random_element(self, rng, bound: int = 50) -> int:
        return rng.randint(-bound, bound)


class PolyRing:
    """F_p[x] for a prime ``p``; use :func:`poly_ring` to get the shared instance."""

    kind = "poly_mod_p"

    def __init__(self, p: int):
        if not ZZ.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}[x]"
        self.zero = Poly._raw((), p)
        self.one = Poly._raw((1,), p)

    def __repr__(self):
        return f"PolyRing({self.p})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.p == self.p

    def __hash__(self):
        return hash(("Fp[x]", self.p))

    def owns(self, a) -> bool:
        return isinstance(a, Poly) and a.p == self.p

    def coerce(self, a) -> Poly:
        if isinstance(a, Poly):
            if a.p != self.p:
                raise MixedRingError(f"{a!r} is not in {self.name}")
            return a
        if isinstance(a, bool):
            raise MixedRingError(f"{a!r} is not a polynomial")
        if isinstance(a, int):
            return Poly((a,), self.p)
        if isinstance(a, (list, tuple)):
            return Poly(a, self.p)
        raise MixedRingError(f"{a!r} is not a polynomial")

    def canonical(self, a: Poly) -> Poly:
        if not a.c or a.c[-1] == 1:
            return a
        return a * pow(a.c[-1], -1, self.p)

    def normalizer(self, a: Poly) -> Poly:
        if not a.c:
            return self.one
        return Poly((pow(a.c[-1], -1, self.p),), self.p)

    def is_unit(self, a: Poly) -> bool:
        return len(a.c) == 1

    def norm(self, a: Poly) -> int:
        return len(a.c) - 1

    def divmod(self, a: Poly, b: Poly):
        return divmod(a, b)

    def residues(self, d: Poly) -> Iterator[Poly]:
        n = len(d.c) - 1
        p = self.p
        for coeffs in itertools.product(range(p), repeat=n):
            yield Poly(coeffs[::-1], p)

    def residue_count(self, d: Poly) -> int:
        return self.p ** (len(d.c) - 1)

    def monic(self, degree: int) -> Iterator[Poly]:
        p = self.p
        for coeffs in itertools.product(range(p), repeat=degree):
            yield Poly._raw(tuple(coeffs[::-1]) + (1,), p)

    def sort_key(self, a: Poly):
        return (len(a.c), a.c[::-1])

    def fmt(self, a: Poly) -> str:
        return format_poly(a)

    def fmt_factor(self, a: Poly) -> str:
        s = format_poly(a)
        return f"({s})" if "+" in s else s

    def parse(self, text) -> Poly:
        if isinstance(text, (list, tuple)):
            return Poly(text, self.p)
        if isinstance(text, Poly):
            return self.coerce(text)
        if isinstance(text, int) and not isinstance(text, bool):
            return Poly((text,), self.p)
        return parse_poly(str(text), self.p)

    def _smallest_factor(self, f: Poly) -> Poly:
        n = f.degree
        for d in range(1, n // 2 + 1):
            for g in self.monic(d):
                if not (f % g).c:
                    return g
        return self.canonical(f)

    def factor(self, a: Poly) -> list[tuple[Poly, int]]:
        if not a.c:
            raise ValueError("cannot factor zero")
        f = self.canonical(a)
        out: list[tuple[Poly, int]] = []
        while f.degree > 0:
            g = self._smallest_factor(f)
            e = 0
            while True:
                q, r = divmod(f, g)
                if r.c:
                    break
                f, e = q, e + 1
            out.append((g, e))
        return out

    def is_prime(self, a: Poly) -> bool:
        if a.degree < 1:
            return False
        return self._smallest_factor(self.canonical(a)) == self.canonical(a)

    def primes(self) -> Iterator[Poly]:
        """Monic irreducibles by increasing degree."""
        d = 1
        while True:
            for g in self.monic(d):
                if self.is_prime(g):
                    yield g
            d += 1

    def random_element(self, rng, bound: int = 3) -> Poly:
        deg = rng.randint(-1, bound)
        return Poly([rng.randrange(self.p) for _ in range(deg + 1)], self.p)


ZZ = Integers()


@functools.lru_cache(maxsize=None)
def poly_ring(p: int) -> PolyRing:
    return PolyRing(p)


def ring_of(*elems):
    """Return the ring that owns all of ``elems``; raise on a mix."""
    ring = None
    for a in elems:
        if isinstance(a, Poly):
            r = poly_ring(a.p)
        elif isinstance(a, int) and not isinstance(a, bool):
            r = ZZ
        else:
            raise MixedRingError(f"{a!r} is not a ring element")
        if ring is None:
            ring = r
        elif ring != r:
            raise MixedRingError(f"elements of {ring.name} and {r.name} mixed")
    return ring if ring is not None else ZZ


# ---------------------------------------------------------------------------
# Euclidean algorithms, generic over the two rings.


def _xgcd(ring, a, b):
    x0, x1 = ring.one, ring.zero
    y0, y1 = ring.zero, ring.one
    while b:
        q, r = ring.divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    u = ring.normalizer(a)
    return a * u, x0 * u, y0 * u


def xgcd(a, b):
    """Return ``(g, u, v)`` with ``g = u*a + v*b`` and ``g`` canonical."""
    ring = ring_of(a, b)
    return _xgcd(ring, a, b)


def gcd(ring, a, b):
    if ring is ZZ:
        return _math_gcd(a, b)
    while b:
        a, b = b, ring.divmod(a, b)[1]
    return ring.canonical(a)


def lcm(ring, a, b):
    if not a or not b:
        return ring.zero
    return ring.canonical(ring.divmod(a * b, gcd(ring, a, b))[0])


def divides(ring, a, b) -> bool:
    """True iff ``a | b``."""
    if not a:
        return not b
    return not ring.divmod(b, a)[1]


def exact_div(ring, a, b):
    q, r = ring.divmod(a, b)
    if r:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return q


def factor(a):
    """Prime factorization of a nonzero element as sorted ``(prime, exp)`` pairs."""
    ring = ring_of(a)
    return ring.factor(a)


def radical(a, ring=None):
    """Squarefree canonical product of the primes dividing ``a``.

    ``radical(0) == 0`` and the radical of a unit is 1.
    """
    return _radical(ring or ring_of(a), a)


@functools.lru_cache(maxsize=4096)
def _radical(ring, a):
    if not a:
        return ring.zero
    out = ring.one
    for q, _ in ring.factor(a):
        out = out * q
    return ring.canonical(out)


def coprime_part(ring, d, a):
    """Largest divisor of ``d`` coprime to ``a`` (canonical)."""
    if not d:
        return ring.zero
    if not a:
        # every prime divides zero
        return ring.one
    d = ring.canonical(d)
    while True:
        g = gcd(ring, d, a)
        if ring.is_unit(g):
            return d
        d = exact_div(ring, d, g)


def supported_part(ring, d, a):
    """Largest divisor of nonzero ``d`` whose primes all divide ``a``."""
    return ring.canonical(exact_div(ring, ring.canonical(d), coprime_part(ring, d, a)))


def max_exponent(ring, d, a) -> int:
    """Largest multiplicity in ``d`` of a prime dividing ``a`` (``d != 0``)."""
    if not a:
        return 0
    e = 0
    d = ring.canonical(d)
    while True:
        g = gcd(ring, d, a)
        if ring.is_unit(g):
            return e
        d = exact_div(ring, d, g)
        e += 1


def bezout(ring, gens):
    """Return ``(g, coeffs)`` with ``g = sum(c*x)`` the canonical gcd of ``gens``."""
    g = ring.zero
    coeffs: list = []
    for x in gens:
        g, u, v = _xgcd(ring, g, x)
        coeffs = [c * u for c in coeffs] + [v]
    return g, coeffs


# ---------------------------------------------------------------------------
# Principal ideals.


@dataclass(frozen=True)
class PrincipalIdeal:
    """Ideal ``(gen)`` of a PID; ``gen`` is always stored canonically."""

    ring: object
    gen: object

    def __post_init__(self):
        g = self.ring.coerce(self.gen)
        object.__setattr__(self, "gen", self.ring.canonical(g))

    @classmethod
    def of(cls, a, ring=None):
        return cls(ring or ring_of(a), a)

    def is_zero(self) -> bool:
        return not self.gen

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.gen)

    def __add__(self, other):
        return self.sum(other)

    def __mul__(self, other):
        return self.product(other)

    def _check(self, other):
        if self.ring != other.ring:
            raise MixedRingError(f"ideals of {self.ring.name} and {other.ring.name}")

    def sum(self, other: "PrincipalIdeal") -> "PrincipalIdeal":
        self._check(other)
        return PrincipalIdeal(self.ring, gcd(self.ring, self.gen, other.gen))

    def intersect(self, other: "PrincipalIdeal") -> "PrincipalIdeal":
        self._check(other)
        return PrincipalIdeal(self.ring, lcm(self.ring, self.gen, other.gen))

    def product(self, other: "PrincipalIdeal") -> "PrincipalIdeal":
        self._check(other)
        return PrincipalIdeal(self.ring, self.gen * other.gen)

    def power(self, n: int) -> "PrincipalIdeal":
        if n < 0:
            raise ValueError("negative ideal power")
        return PrincipalIdeal(self.ring, self.gen ** n)

    def contains(self, a) -> bool:
        return divides(self.ring, self.gen, self.ring.coerce(a))

    def __contains__(self, a):
        return self.contains(a)

    def includes(self, other: "PrincipalIdeal") -> bool:
        """Ideal containment ``other ⊆ self``."""
        self._check(other)
        return divides(self.ring, self.gen, other.gen)

    def radical(self) -> "PrincipalIdeal":
        return PrincipalIdeal(self.ring, radical(self.gen, self.ring))

    def is_prime(self) -> bool:
        return not self.gen or self.ring.is_prime(self.gen)

    def __str__(self):
        return f"({self.ring.fmt(self.gen)})"

import itertools
from math import gcd as igcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primesheaf.errors import MixedRingError
from primesheaf.ring_core import (
    ZZ, Poly, PrincipalIdeal, bezout, coprime_part, factor, format_poly, parse_poly,
    poly_ring, radical, ring_of, xgcd,
)

F5 = poly_ring(5)
F2 = poly_ring(2)


def test_xgcd_examples():
    assert xgcd(6, 4) == (2, 1, -1)
    g, u, v = xgcd(12, 18)
    assert g == 6 and 12 * u + 18 * v == 6
    assert xgcd(0, -7) == (7, 0, -1)
    assert xgcd(0, 7) == (7, 0, 1)


def test_factor_examples():
    assert factor(30) == [(2, 1), (3, 1), (5, 1)]
    assert factor(1) == []
    assert factor(F5.parse("x^2 - 1")) == [(Poly([1, 1], 5), 1), (Poly([4, 1], 5), 1)]


def test_radical_examples():
    assert radical(12) == 6
    assert radical(0) == 0
    assert radical(7) == 7
    assert radical(-12) == 6


def test_ideal_examples():
    I = PrincipalIdeal.of
    assert I(4).sum(I(6)) == I(2)
    assert I(3).contains(9)
    assert not I(6).is_prime()
    assert I(7).is_prime() and I(0).is_prime() and not I(1).is_prime()
    assert I(-6) == I(6)
    assert I(4).intersect(I(6)) == I(12)
    assert I(4).product(I(6)) == I(24)
    assert I(6).power(2) == I(36)
    assert I(12).radical() == I(6)


def test_mixed_rings_rejected():
    with pytest.raises(MixedRingError):
        ring_of(3, F5.parse("x"))
    with pytest.raises(MixedRingError):
        ring_of(F2.parse("x"), F5.parse("x"))


def test_poly_text_roundtrip():
    for text in ["x^2 + 4", "x", "1", "x^3 + 2x + 1", "0"]:
        f = parse_poly(text, 5)
        assert parse_poly(format_poly(f), 5) == f
    assert F5.parse([1, 1]) == F5.parse("x + 1")


def test_canonical_forms():
    assert ZZ.canonical(-4) == 4
    f = F5.parse("2x + 1")
    assert F5.canonical(f).lead == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(-10 ** 30, 10 ** 30), st.integers(-10 ** 30, 10 ** 30))
def test_xgcd_identity_bigints(a, b):
    g, u, v = xgcd(a, b)
    assert g == u * a + v * b
    assert g == igcd(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10 ** 6))
def test_factor_recomposes(n):
    out = 1
    for q, e in factor(n):
        assert ZZ.is_prime(q)
        out *= q ** e
    assert out == n


@settings(max_examples=200, deadline=None)
@given(st.integers(-10 ** 6, 10 ** 6))
def test_radical_idempotent(n):
    assert radical(radical(n)) == radical(n)


polys5 = st.lists(st.integers(0, 4), min_size=1, max_size=13).map(lambda c: Poly(c, 5))


@settings(max_examples=150, deadline=None)
@given(polys5.filter(lambda f: bool(f)))
def test_poly_factor_recomposes(f):
    out = F5.one
    for q, e in factor(f):
        assert F5.is_prime(q)
        out = out * q ** e
    assert out == F5.canonical(f)


@settings(max_examples=150, deadline=None)
@given(polys5, polys5)
def test_poly_xgcd_identity(a, b):
    g, u, v = xgcd(a, b)
    assert g == u * a + v * b
    if a or b:
        assert not F5.divmod(a, g)[1] and not F5.divmod(b, g)[1]


def test_ideal_ops_against_divisibility():
    # generators up to 1000 would be slow exhaustively; use a sparse grid of pairs
    I = PrincipalIdeal.of
    vals = list(range(1, 61)) + [210, 360, 997, 1000]
    for a, b in itertools.product(vals, repeat=2):
        s, x, p = I(a).sum(I(b)), I(a).intersect(I(b)), I(a).product(I(b))
        assert s.gen == max(d for d in range(1, min(a, b) + 1) if a % d == 0 and b % d == 0)
        assert x.gen % a == 0 and x.gen % b == 0
        assert all(x.gen <= m for m in range(1, x.gen + 1) if m % a == 0 and m % b == 0)
        assert p.gen == a * b


def test_coprime_part_and_bezout():
    assert coprime_part(ZZ, 360, 6) == 5
    assert coprime_part(ZZ, 0, 6) == 0
    g, cs = bezout(ZZ, [6, 10, 15])
    assert g == 1 and sum(c * x for c, x in zip(cs, [6, 10, 15])) == 1

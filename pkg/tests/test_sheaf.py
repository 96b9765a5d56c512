import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import coprime_part, crt_image
from primesheaf import sheaf as sh
from primesheaf.errors import (
    AmbientMismatchError, IncompatibleSectionsError, NotACoverError, PreconditionError,
)
from primesheaf.fgmod import FgModule, ModuleHom, Submodule, localize, localize_at_prime, scalar_submodule
from primesheaf.ring_core import ZZ, PrincipalIdeal, poly_ring
from primesheaf.spectrum import basic_open, spec_p

Z = FgModule.free(ZZ, 1)


def D(r):
    return basic_open(r, Z)


def Zmod(*ds, rank=0):
    return FgModule.direct_sum(ZZ, ds, rank)


def sec(N, a, num, k=0):
    return sh.make_section(N, a, num if isinstance(num, tuple) else (num,), k)


# --- worked examples ---------------------------------------------------------


def test_sections_examples():
    assert str(sh.sections(Zmod(8), Z, D(2))) == "0"
    N = Zmod(4, 9, rank=1)
    assert sh.sections(N, Z, D(1)).invariants.invariants() == N.invariants()
    S = sh.sections(Z, Z, D(6))
    assert S.invariants.invariants() == (1, ()) and str(S) == "Z (inverting 6)"
    with pytest.raises(PreconditionError):
        sh.sections(Zmod(8), Zmod(6), basic_open(2, Zmod(6)))


def test_epsilon_examples():
    assert sh.epsilon(Z, D(2), (5,)) == sec(Z, 2, 5)
    assert str(sh.epsilon(Z, D(2), (5,))) == "5"
    assert sh.is_zero_section(sh.epsilon(Zmod(8), D(2), (1,)))
    # 2·7 = 0 in Z/14, so 7 dies once 2 is inverted; 2 survives in the Z/7 part
    assert sh.is_zero_section(sh.epsilon(Zmod(14), D(2), (7,)))
    assert not sh.is_zero_section(sh.epsilon(Zmod(14), D(2), (2,)))


def test_epsilon_kernel_examples():
    N = Zmod(2, 3, 7)
    K = sh.epsilon_kernel(N, D(30))
    assert K.as_module().invariants() == (0, (6,))
    assert sh.epsilon_kernel(Z, D(3)).is_zero()
    assert sh.epsilon_kernel(Zmod(8), D(2)).is_whole()


def test_section_arithmetic_examples():
    assert sh.section_eq(sec(Z, 2, 3, 1), sec(Z, 2, 3, 1))
    # 7 is 2-torsion in Z/14 but no power of 7 kills it
    assert sh.section_eq(sec(Zmod(14), 2, 7), sh.zero_section(Zmod(14), 2))
    assert not sh.section_eq(sec(Zmod(14), 7, 7), sh.zero_section(Zmod(14), 7))
    half = sec(Z, 2, 1, 1)
    assert sh.section_add(half, half) == sec(Z, 2, 1)
    assert sh.section_sub(half, half) == sh.zero_section(Z, 2)
    assert sh.section_scale(4, half) == sec(Z, 2, 2)
    assert sh.section_neg(half) == sec(Z, 2, -1, 1)


def test_restrict_examples():
    s = sh.restrict(sec(Z, 2, 3, 1), D(2), D(6))
    assert str(s) == "9/6" and sh.section_eq(s, sec(Z, 6, 9, 1))
    assert sh.is_zero_section(sh.restrict(sec(Zmod(9), 2, 1), D(2), D(6)))
    with pytest.raises(PreconditionError):
        sh.restrict(sec(Z, 6, 1), D(6), D(2))


def test_restriction_kernel_examples():
    assert sh.in_restriction_kernel(sec(Zmod(9), 2, 1), D(2), D(6))
    assert not sh.in_restriction_kernel(sec(Z, 2, 5), D(2), D(6))
    assert sh.in_restriction_kernel(sec(Zmod(14), 1, 2), D(1), D(7))


def test_coker_witness_examples():
    assert sh.coker_witness(sec(Z, 2, 3, 2)) == (2, (3,))
    assert sh.coker_witness(sh.epsilon(Z, D(2), (5,))) == (0, (5,))
    h, m = sh.coker_witness(sh.epsilon(Zmod(14), D(2), (5,)))
    assert h == 0 and sh.epsilon(Zmod(14), D(2), m) == sh.epsilon(Zmod(14), D(2), (5,))
    # 1/2 in (Z/14)_2 already equals 4 = ε(4): the least witness has h = 0
    assert sh.coker_witness(sec(Zmod(14), 2, 1, 1)) == (0, (4,))


def test_glue_examples():
    N = Zmod(35)
    # value 3 in the surviving Z/7 over D(5), value 2 in Z/5 over D(7)
    a = sh.make_section(N, 5, (3 * 15,), 0)  # 15 is 1 mod 7 and 0 mod 5
    b = sh.make_section(N, 7, (2 * 21,), 0)
    g = sh.glue([(D(5), a), (D(7), b)], D(1))
    assert g == sec(N, 1, 17) and str(g) == "17"
    m = (11,)
    pieces = [(D(q), sh.epsilon(N, D(q), m)) for q in (2, 5, 7)]
    assert sh.glue(pieces, D(1)) == sh.epsilon(N, D(1), m)
    with pytest.raises(IncompatibleSectionsError) as err:
        sh.glue([(D(2), sec(Z, 2, 3, 1)), (D(3), sh.zero_section(Z, 3))], D(1))
    assert err.value.pair == (0, 1)
    assert "D(6)" in str(err.value)


def test_glue_errors():
    N = Zmod(35)
    with pytest.raises(NotACoverError):
        sh.glue([(D(2), sh.zero_section(N, 2))], D(1))
    with pytest.raises(NotACoverError):
        sh.glue([], D(1))
    with pytest.raises(AmbientMismatchError):
        sh.glue([(D(2), sh.zero_section(N, 2)), (D(3), sh.zero_section(Zmod(5), 3))], D(1))
    with pytest.raises(AmbientMismatchError):
        sh.glue([(D(2), sh.zero_section(N, 3))], D(2))
    with pytest.raises(PreconditionError):
        sh.glue([(D(2), sh.zero_section(N, 2))], D(3))
    M6 = Zmod(6)
    with pytest.raises(PreconditionError):
        sh.glue([(basic_open(2, M6), sh.zero_section(N, 2))], basic_open(2, M6))


def test_stalk_examples():
    M = Zmod(2, 3)
    N = Zmod(14)
    P2, P3 = spec_p(M, 2)[0], spec_p(M, 3)[0]
    assert sh.stalk(N, M, P2).invariants.invariants() == (0, (2,))
    assert str(sh.stalk(N, M, P2)) == "Z/2"
    assert sh.stalk(N, M, P3).invariants.is_zero()
    S = sh.stalk(Z, Z, Submodule.zero(Z))
    assert S.invariants.invariants() == (1, ()) and S.prime.is_zero()
    with pytest.raises(PreconditionError):
        sh.stalk(N, Z, scalar_submodule(Z, 4))


def test_section_map_examples():
    N = Zmod(4, 9)
    s = sec(N, 6, (1, 2), 1)
    assert sh.section_map(ModuleHom.identity(N), D(6), s) == s
    h = ModuleHom(Z, Zmod(8), [(1,)])
    assert sh.section_map(h, D(3), sec(Z, 3, 3)) == sec(Zmod(8), 3, 3)
    zero = ModuleHom.zero_map(N, Zmod(5))
    assert sh.is_zero_section(sh.section_map(zero, D(6), s))


def test_ideal_transform_examples():
    assert sh.ideal_transform(Zmod(8), 2).is_zero()
    N = Zmod(4, 9, rank=1)
    assert sh.ideal_transform(N, 1).invariants() == N.invariants()
    assert sh.ideal_transform(Z, PrincipalIdeal.of(6)).invariants() == (1, ())
    with pytest.raises(PreconditionError):
        sh.ideal_transform(Z, 0)


def test_normalize_denominator_examples():
    m = (5,)
    assert sh.normalize_denominator(sec(Z, 2, m, 1), 4) == (4, (10,))
    assert sh.normalize_denominator(sh.epsilon(Z, D(6), m), PrincipalIdeal.of(6)) == (6, (30,))
    assert sh.normalize_denominator(sec(Z, 6, 3, 1), scalar_submodule(Z, 12)) == (12, (6,))
    with pytest.raises(PreconditionError):
        sh.normalize_denominator(sec(Z, 6, 3, 1), 4)


def test_polynomial_sections():
    F3 = poly_ring(3)
    x = F3.parse("x")
    R = FgModule.free(F3, 1)
    N = FgModule(F3, 1, [[x * (x + 1)]])
    s = sh.make_section(N, x, (F3.one,), 1)
    assert str(sh.sections(N, R, basic_open(x, R))) == "F3[x]/(x + 1) (inverting x)"
    c = sh.coker_witness(s)
    assert sh.section_eq(sh.section_scale(x ** c[0], s), sh.epsilon(N, basic_open(x, R), c[1]))
    U, V = basic_open(x, R), basic_open(x + 1, R)
    g = sh.glue([(U, sh.restrict(sh.epsilon(N, basic_open(1, R), (F3.one,)), basic_open(1, R), U)),
                 (V, sh.restrict(sh.epsilon(N, basic_open(1, R), (F3.one,)), basic_open(1, R), V))],
                basic_open(1, R))
    assert g == sh.epsilon(N, basic_open(1, R), (F3.one,))


# --- properties --------------------------------------------------------------

FACTORS = [2, 3, 4, 5, 7, 8, 9, 35]
SQUAREFREE = [1, 2, 3, 5, 6, 10, 15, 30]
modules = st.tuples(st.lists(st.sampled_from(FACTORS), max_size=3), st.integers(0, 2)).map(
    lambda t: Zmod(*t[0], rank=t[1]))


def _sub_opens(f):
    return [g for g in SQUAREFREE + [7, 14, 21, 42, 70, 210] if g % f == 0]


@settings(max_examples=150, deadline=None)
@given(modules, st.sampled_from(SQUAREFREE), st.data())
def test_presheaf_laws(N, f, data):
    num = tuple(data.draw(st.integers(-30, 30)) for _ in range(N.ngens))
    s = sh.make_section(N, f, num, data.draw(st.integers(0, 3)))
    U = D(f)
    assert sh.restrict(s, U, U) == s
    g = data.draw(st.sampled_from(_sub_opens(f)))
    h = data.draw(st.sampled_from(_sub_opens(g)))
    V, W = D(g), D(h)
    assert sh.restrict(sh.restrict(s, U, V), V, W) == sh.restrict(s, U, W)
    # restriction is additive and commutes with ε
    t = sh.make_section(N, f, num[::-1], 1)
    assert sh.restrict(sh.section_add(s, t), U, V) == sh.section_add(sh.restrict(s, U, V), sh.restrict(t, U, V))
    assert sh.restrict(sh.epsilon(N, U, num), U, V) == sh.epsilon(N, V, num)


@settings(max_examples=100, deadline=None)
@given(modules, st.sampled_from(SQUAREFREE[1:]), st.data())
def test_coker_witness_property(N, a, data):
    num = tuple(data.draw(st.integers(-30, 30)) for _ in range(N.ngens))
    s = sh.make_section(N, a, num, data.draw(st.integers(0, 3)))
    h, m = sh.coker_witness(s)
    assert sh.is_zero_section(sh.section_sub(sh.section_scale(a ** h, s), sh.epsilon(N, D(a), m)))
    n = N.order()
    if n is not None and n <= 200:
        in_image = any(sh.epsilon(N, D(a), x.vec) == s for x in N.elements())
        assert (h == 0) == in_image


def test_canonical_form_is_unique():
    # s == t as elements of N_a iff their canonical forms coincide
    rng = random.Random(5)
    for _ in range(300):
        orders = [rng.choice(FACTORS) for _ in range(rng.randint(0, 2))]
        N = Zmod(*orders, rank=rng.randint(0, 1))
        a = rng.choice(SQUAREFREE[1:])
        s = sh.make_section(N, a, tuple(rng.randint(-20, 20) for _ in range(N.ngens)), rng.randint(0, 2))
        k = rng.randint(0, 2)
        t = sh.make_section(N, a, tuple(a ** k * x for x in s.num), s.exp + k)
        assert s == t and sh.section_eq(s, t)


def test_restriction_kernel_matches_restriction_exhaustively():
    for orders in [(4, 9), (2, 35), (8, 3), (9, 5, 7), (4, 4, 3)]:
        N = Zmod(*orders)
        for f in (1, 2, 3, 5):
            for g in _sub_opens(f):
                U, V = D(f), D(g)
                for x in N.elements():
                    for k in (0, 1):
                        s = sh.make_section(N, f, x.vec, k)
                        assert sh.in_restriction_kernel(s, U, V) == sh.is_zero_section(sh.restrict(s, U, V))


def _random_hom(rng, L, N):
    # images chosen so that relations map to zero: scale a random vector by the source order
    imgs = []
    for d in L.components:
        v = tuple(rng.randint(-6, 6) for _ in range(N.ngens))
        if d:
            e = N.exponent() if N.order() is not None else 0
            # d * v must vanish: take v in the d-torsion of N when N is finite, else zero
            v = tuple((e // _g(e, d)) * x for x in v) if e else tuple(0 for _ in v)
        imgs.append(v)
    gens = L.component_generators()
    # express the hom on the presentation generators through Smith coordinates
    images = []
    for i in range(L.ngens):
        e_i = tuple(int(i == j) for j in range(L.ngens))
        ys = L.coords(e_i)
        out = tuple(0 for _ in range(N.ngens))
        for y, v in zip(ys, imgs):
            out = tuple(a + y * b for a, b in zip(out, v))
        images.append(out)
    assert len(gens) == len(imgs)
    return ModuleHom(L, N, images)


def _g(a, b):
    from math import gcd
    return gcd(a, b)


def test_section_map_functor_laws():
    rng = random.Random(11)
    for _ in range(120):
        L, N, P = (Zmod(*[rng.choice(FACTORS) for _ in range(rng.randint(1, 2))], rank=rng.randint(0, 1))
                   for _ in range(3))
        h1, h2 = _random_hom(rng, L, N), _random_hom(rng, N, P)
        a = rng.choice(SQUAREFREE[1:])
        U = D(a)
        m = tuple(rng.randint(-10, 10) for _ in range(L.ngens))
        s = sh.make_section(L, a, m, rng.randint(0, 2))
        assert sh.section_map(ModuleHom.identity(L), U, s) == s
        assert sh.section_map(h2.compose(h1), U, s) == sh.section_map(h2, U, sh.section_map(h1, U, s))
        # naturality of ε
        assert sh.section_map(h1, U, sh.epsilon(L, U, m)) == sh.epsilon(N, U, h1(m).vec)


def test_stalk_is_the_direct_limit():
    primes = [2, 3, 5, 7, 11]
    for orders in [(4, 9), (2, 35), (8, 3, 7), (9, 5), (22, 4)]:
        N = Zmod(*orders, rank=1)
        for p in primes:
            P = spec_p(Z, p)[0]
            st_ = sh.stalk(N, Z, P).invariants
            # sections over D(a), a running over products of primes outside p, stabilize
            chain = [1]
            for q in primes:
                if q != p:
                    chain.append(chain[-1] * q)
            limit = sh.sections(N, Z, D(chain[-1])).invariants
            assert limit.invariants() == st_.invariants()
            # brute force: p-primary part of each cyclic factor
            expect = tuple(sorted((d // coprime_part(d, p) for d in orders if d % p == 0),
                                  key=lambda x: x))
            assert st_.torsion == tuple(sorted(expect))
            assert st_.rank == 1


def test_local_sections_match_crt():
    rng = random.Random(2)
    N = Zmod(8, 9, 35)
    for _ in range(200):
        a = rng.choice(SQUAREFREE[1:])
        x = tuple(rng.randint(0, 100) for _ in range(3))
        k = rng.randint(0, 3)
        s = sh.make_section(N, a, x, k)
        assert crt_image(s.num, (8, 9, 35), a, s.exp) == crt_image(x, (8, 9, 35), a, k)
        assert localize(N, a).invariants() == sh.sections(N, Z, D(a)).invariants.invariants()


def test_transform_triangle_small():
    N = Zmod(4, 15, rank=1)
    for a in (2, 3, 6, 10):
        for x in itertools.product(range(-3, 4), range(15), range(4)):
            assert sh.transform_map(sh.epsilon(N, D(a), x)) == sh.eta(N, a, x)


def test_stalk_over_nonfaithful_module():
    M = Zmod(2, 3)
    assert localize_at_prime(Zmod(14), 2).invariants() == sh.stalk(Zmod(14), M, spec_p(M, 2)[0]).invariants.invariants()

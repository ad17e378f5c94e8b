import cmath
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from skeintorus.lattice import (LatticeError, balanced_basis_cached, vadd, vscale, wp_form)
from skeintorus.qtorus import (CyclotomicScalar as CS, TorusElement, build_irrep,
                               center_generators, commutes_with_basis, cyclotomic_polynomial,
                               is_central, skew_normal_form, torus_rank, totient_degree)
from skeintorus.qtrace import boundary_vector, puncture_vector
from skeintorus.surface import FIXTURES, fixture

ODD = (3, 5, 7, 9, 15)
laurent = st.dictionaries(st.integers(-12, 12), st.integers(-5, 5), max_size=5)


def rand_balanced(t, rng, bound=2):
    k = (0,) * t.num_edges
    for g in balanced_basis_cached(t).generators:
        k = vadd(k, vscale(rng.randint(-bound, bound), g))
    return k


def rand_element(t, rng, N=None, terms=3):
    x = TorusElement(t, {}, N)
    for _ in range(terms):
        c = CS.omega(rng.randint(0, 8), N, rng.choice([1, -1, 2]))
        x = x + TorusElement(t, {rand_balanced(t, rng): c}, N)
    return x


# ----------------------------------------------------------------------
# scalars

@pytest.mark.parametrize("N", ODD)
def test_cyclotomic_polynomial_matches_sympy(N):
    x = sympy.Symbol("x")
    ours = cyclotomic_polynomial(N)
    theirs = sympy.Poly(sympy.cyclotomic_poly(N, x), x).all_coeffs()[::-1]
    assert list(ours) == [int(c) for c in theirs]
    assert totient_degree(N) == sympy.totient(N)


@settings(max_examples=150, deadline=None)
@given(laurent, laurent, st.sampled_from(ODD))
def test_scalar_arithmetic_matches_complex_evaluation(a, b, N):
    w = cmath.exp(2j * cmath.pi / N)
    ev = lambda d: sum(c * w ** k for k, c in d.items())
    A, B = CS(a).at(N), CS(b).at(N)
    assert abs((A * B).to_complex() - ev(a) * ev(b)) < 1e-8
    assert abs((A + B).to_complex() - (ev(a) + ev(b))) < 1e-8
    assert ((A - B).is_zero()) == (abs(ev(a) - ev(b)) < 1e-9)


@settings(max_examples=100, deadline=None)
@given(laurent, laurent, laurent)
def test_generic_ring_axioms(a, b, c):
    A, B, C = CS(a), CS(b), CS(c)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A


@pytest.mark.parametrize("N", ODD)
def test_omega_inverse(N):
    w = CS.omega(1, N)
    assert w * CS.omega(N - 1, N) == CS.one(N)
    assert w.inverse() == CS.omega(-1, N)
    assert w ** N == CS.one(N)


def test_mode_mismatch_is_type_error():
    with pytest.raises(TypeError):
        CS.one() + CS.one(3)
    with pytest.raises(TypeError):
        CS.one(3) * CS.one(5)
    t = fixture("triangle")
    with pytest.raises(TypeError):
        TorusElement.scalar(t, 1) + TorusElement.scalar(t, 1, 3)


def test_as_monomial_and_json():
    assert CS.omega(4, 7, -1).as_monomial() == (-1, 4)
    assert CS({2: 3}).to_json() == {"2": 3}
    assert CS.omega(1, 3).to_json() == [0, 1]


# ----------------------------------------------------------------------
# torus arithmetic

def test_triangle_monomial_product():
    t = fixture("triangle")
    k1, k2 = (0, 1, 1), (1, 0, 1)
    prod = TorusElement.monomial(t, k1) * TorusElement.monomial(t, k2)
    assert prod == TorusElement(t, {vadd(k1, k2): CS.omega(-wp_form(t, k1, k2))})
    assert prod == TorusElement(t, {(1, 1, 2): CS.omega(-1)})


@pytest.mark.parametrize("name", FIXTURES)
def test_inverse_monomials(name):
    t = fixture(name)
    rng = random.Random(1)
    for _ in range(20):
        k = rand_balanced(t, rng)
        assert TorusElement.monomial(t, k) * TorusElement.monomial(t, vscale(-1, k)) == 1


@pytest.mark.parametrize("name", FIXTURES)
def test_ring_axioms(name):
    t = fixture(name)
    rng = random.Random(2)
    for _ in range(20):
        a, b, c = (rand_element(t, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a + b) * c == a * c + b * c


@pytest.mark.parametrize("name", FIXTURES)
def test_q_commutation(name):
    t = fixture(name)
    rng = random.Random(3)
    for _ in range(30):
        e1, e2 = rand_balanced(t, rng), rand_balanced(t, rng)
        A, B = TorusElement.monomial(t, e1), TorusElement.monomial(t, e2)
        assert A * B == (B * A).scale(CS.omega(-2 * wp_form(t, e1, e2)))


def test_specialization_is_a_ring_map():
    t = fixture("annulus")
    rng = random.Random(4)
    for _ in range(20):
        a, b = rand_element(t, rng), rand_element(t, rng)
        assert (a * b).at(5) == a.at(5) * b.at(5)


# ----------------------------------------------------------------------
# center and rank

@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("N", [3, 5])
def test_is_central_agrees_with_commutation(name, N):
    t = fixture(name)
    rng = random.Random(5)
    K0 = [c for c in center_generators(t, N)[2]]
    for i in range(200):
        if i % 2:
            k = (0,) * t.num_edges
            for g in K0:
                k = vadd(k, vscale(rng.randint(-1, 1), g))
            k = vadd(k, rand_balanced(t, rng, 1)) if i % 4 == 1 else k
        else:
            k = rand_balanced(t, rng)
        x = TorusElement.monomial(t, k, N)
        assert is_central(x, N) == commutes_with_basis(x)


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("N", [3, 5])
def test_frobenius_and_central_vectors(name, N):
    t = fixture(name)
    rng = random.Random(6)
    for _ in range(10):
        assert is_central(TorusElement.monomial(t, vscale(N, rand_balanced(t, rng)), N), N)
    for p in t.inner_punctures:
        assert is_central(TorusElement.monomial(t, puncture_vector(t, p), N), N)
    for i in range(t.num_boundary_components):
        assert is_central(TorusElement.monomial(t, boundary_vector(t, i), N), N)


def test_triangle_k1_not_central():
    t = fixture("triangle")
    assert wp_form(t, (0, 1, 1), (1, 0, 1)) % 3
    assert not is_central(TorusElement.monomial(t, (0, 1, 1), 3), 3)


@pytest.mark.parametrize("name,N,exp", [("triangle", 3, 2), ("square", 3, 4),
                                        ("holed_torus", 5, 4), ("annulus", 5, 2)])
def test_torus_rank_examples(name, N, exp):
    r = torus_rank(fixture(name), N)
    assert (r.N, r.exponent) == (N, exp)
    assert str(r) == f"{N}^{exp}"


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("N", [3, 5, 7])
def test_torus_rank_is_square_of_dimension(name, N):
    t = fixture(name)
    r = torus_rank(t, N)
    assert r.exponent == 2 * t.dimension_exponent


def test_rank_rejects_even():
    with pytest.raises(LatticeError):
        torus_rank(fixture("triangle"), 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(
    st.lists(st.integers(-3, 3), min_size=2 * n, max_size=2 * n), min_size=2 * n, max_size=2 * n)))
def test_skew_normal_form(A):
    n = len(A)
    G = [[A[i][j] - A[j][i] for j in range(n)] for i in range(n)]
    P, pairs, radical = skew_normal_form(G)
    M = sympy.Matrix(P) * sympy.Matrix(G) * sympy.Matrix(P).T
    assert abs(sympy.Matrix(P).det()) == 1
    expected = sympy.zeros(n, n)
    for i, d in pairs:
        assert d > 0
        expected[i, i + 1], expected[i + 1, i] = d, -d
    assert M == expected


# ----------------------------------------------------------------------
# irreducible representations

@pytest.mark.parametrize("name", ["triangle", "annulus", "square", "holed_torus"])
@pytest.mark.parametrize("N", [3, 5])
def test_irrep_contracts(name, N):
    t = fixture(name)
    rng = random.Random(8)
    central = center_generators(t, N)[2]
    chi = {g: cmath.exp(1j * rng.uniform(0, 6)) * rng.uniform(0.5, 2) for g in central}
    rep = build_irrep(t, N, chi)
    assert rep.dimension ** 2 == torus_rank(t, N).value
    assert rep.relation_residual() < 1e-9
    assert rep.center_residual() < 1e-9
    gens = balanced_basis_cached(t).generators
    pairs = [(a, b) for a in gens for b in gens]
    assert rep.weyl_residual(pairs) < 1e-9


def test_triangle_irrep_span():
    rep = build_irrep(fixture("triangle"), 3)
    assert rep.dimension == 3
    assert rep.span_dimension() == 9


def test_irrep_rejects_bad_character():
    t = fixture("triangle")
    with pytest.raises(LatticeError):
        build_irrep(t, 3, {(9, 9, 9): 1})
    g = center_generators(t, 3)[2][0]
    with pytest.raises(LatticeError):
        build_irrep(t, 3, {g: 0})

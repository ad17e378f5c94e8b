import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from skeintorus.lattice import (LatticeError, balanced_basis, balanced_basis_cached,
                                check_switch, constant_weights, elementary_divisors,
                                in_kernel, is_balanced, lex_key, make_basis, matmul,
                                pairing_kernel_mod_n, phi_from_train_track,
                                phi_to_train_track, smith_normal_form, solve_in_basis,
                                sublattice_index, triangle_basis, vadd, vscale, wp_form)
from skeintorus.surface import FIXTURES, fixture

matrices = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


def det(M):
    return int(sympy.Matrix(M).det())


def random_balanced(t, rng, bound=4):
    B = balanced_basis_cached(t)
    k = (0,) * t.num_edges
    for g in B.generators:
        k = vadd(k, vscale(rng.randint(-bound, bound), g))
    return k


# ----------------------------------------------------------------------
# Smith normal form

@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_certificate(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    m, n = len(M), len(M[0])
    assert all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    diag = [D[i][i] for i in range(min(m, n))]
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_matches_sympy(M):
    S = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    theirs = [abs(int(S[i, i])) for i in range(min(S.shape))]
    assert elementary_divisors(M) == theirs


def test_snf_examples():
    assert smith_normal_form([[0, 1], [-1, 0]])[1] == [[1, 0], [0, 1]]
    assert smith_normal_form([[0, 0], [0, 0]])[1] == [[0, 0], [0, 0]]
    U, D, V = smith_normal_form([[2, 0], [0, 6]])
    assert D == [[2, 0], [0, 6]] and U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]


def test_snf_big_integers():
    M = [[10**30, 3], [7, 10**25]]
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert D[0][0] * D[1][1] == abs(det(M))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_solve_in_basis(basis, c):
    if det(basis) == 0:
        return
    v = [sum(ci * b[j] for ci, b in zip(c, basis)) for j in range(3)]
    assert solve_in_basis(basis, v) == c


def test_solve_in_basis_rejects():
    with pytest.raises(LatticeError):
        solve_in_basis([[2, 0], [0, 2]], [1, 0])


# ----------------------------------------------------------------------
# balanced lattice and Weil-Petersson form

def test_triangle_wp_double_sum():
    t = fixture("triangle")
    a = t.adjacency
    k1, k2 = (0, 1, 1), (1, 0, 1)
    oracle = sum(k1[i] * k2[j] * (a[i][j] - a[j][i]) for i in range(3) for j in range(3))
    assert oracle == 1
    assert wp_form(t, k1, k2) == 1


@pytest.mark.parametrize("name", FIXTURES)
def test_wp_skew_and_bilinear(name):
    t = fixture(name)
    rng = random.Random(7)
    for _ in range(100):
        k1, k2, k3 = (random_balanced(t, rng) for _ in range(3))
        assert wp_form(t, k1, k1) == 0
        assert wp_form(t, k1, k2) == -wp_form(t, k2, k1)
        assert wp_form(t, vadd(k1, k2), k3) == wp_form(t, k1, k3) + wp_form(t, k2, k3)


def test_triangle_basis_brute_force():
    t = fixture("triangle")
    box = [k for k in itertools.product(range(-2, 3), repeat=3) if sum(k) % 2 == 0]
    assert all(is_balanced(t, k) for k in box)
    B = triangle_basis(t)
    for k in box:
        solve_in_basis([list(g) for g in B.generators], k)
    assert sublattice_index(B.generators, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 2


@pytest.mark.parametrize("name", FIXTURES)
def test_balanced_basis_spans_balanced_box(name):
    t = fixture(name)
    B = balanced_basis(t)
    assert B.rank == t.num_edges
    gens = [list(g) for g in B.generators]
    n = t.num_edges
    for k in itertools.product(range(-1, 2), repeat=n):
        try:
            solve_in_basis(gens, k)
            inside = True
        except LatticeError:
            inside = False
        assert inside == is_balanced(t, k)
    for i in range(n):
        assert is_balanced(t, tuple(2 * (j == i) for j in range(n)))


def test_annulus_rank():
    assert balanced_basis(fixture("annulus")).rank == 4


# ----------------------------------------------------------------------
# pairing kernel

def coset_count(t, N):
    """|K / K0| as the number of distinct pairing vectors of K / N K (oracle)."""
    gens = balanced_basis_cached(t).generators
    images = set()
    for c in itertools.product(range(N), repeat=len(gens)):
        k = (0,) * t.num_edges
        for ci, g in zip(c, gens):
            k = vadd(k, vscale(ci, g))
        images.add(tuple(wp_form(t, k, g) % N for g in gens))
    return len(images)


@pytest.mark.parametrize("name,N,index", [("triangle", 3, 9), ("annulus", 3, 9),
                                          ("annulus", 5, 25), ("square", 3, 81)])
def test_kernel_index_matches_coset_oracle(name, N, index):
    t = fixture(name)
    K = pairing_kernel_mod_n(balanced_basis_cached(t), N)
    assert K.index == index == coset_count(t, N)
    assert K.index_str == f"{N}^{K.exponent}"


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("N", [3, 5])
def test_kernel_contains_n_times_lattice(name, N):
    t = fixture(name)
    K = pairing_kernel_mod_n(balanced_basis_cached(t), N)
    for v in K.vectors:
        assert in_kernel(t, v, N)
    for g in balanced_basis_cached(t).generators:
        assert in_kernel(t, vscale(N, g), N)


@pytest.mark.parametrize("name", FIXTURES)
def test_kernel_index_basis_independent(name):
    t = fixture(name)
    B = balanced_basis_cached(t)
    rng = random.Random(3)
    n = B.rank
    # random unimodular change of basis
    gens = [list(g) for g in B.generators]
    for _ in range(20):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-2, 2)
        gens[i] = [x + c * y for x, y in zip(gens[i], gens[j])]
    B2 = make_basis(t, gens)
    for N in (3, 5, 7):
        assert pairing_kernel_mod_n(B, N).index == pairing_kernel_mod_n(B2, N).index


@pytest.mark.parametrize("N", [0, 1, 2, 4, -3])
def test_kernel_rejects_bad_n(N):
    with pytest.raises(LatticeError):
        pairing_kernel_mod_n(balanced_basis_cached(fixture("triangle")), N)


# ----------------------------------------------------------------------
# train tracks

def test_triangle_phi_example():
    t = fixture("triangle")
    w = phi_to_train_track(t, (0, 1, 1))
    assert w == {(0, 0): 0, (0, 1): 1, (0, 2): 0}


def test_phi_zero_and_constant():
    for name in FIXTURES:
        t = fixture(name)
        assert set(phi_to_train_track(t, (0,) * t.num_edges).values()) == {0}
        assert phi_from_train_track(t, constant_weights(t, 1)) == (2,) * t.num_edges
        assert phi_from_train_track(t, constant_weights(t, 0)) == (0,) * t.num_edges


def test_switch_violation():
    t = fixture("square")
    w = constant_weights(t, 0)
    w[(0, 1)] = 1  # corner of face L meeting the diagonal x
    with pytest.raises(LatticeError):
        check_switch(t, w)
    with pytest.raises(LatticeError):
        phi_from_train_track(t, w)


@pytest.mark.parametrize("name", FIXTURES)
def test_phi_round_trip_and_additive(name):
    t = fixture(name)
    rng = random.Random(11)
    for _ in range(100):
        k1, k2 = random_balanced(t, rng), random_balanced(t, rng)
        w1, w2 = phi_to_train_track(t, k1), phi_to_train_track(t, k2)
        assert phi_from_train_track(t, w1) == k1
        w12 = phi_to_train_track(t, vadd(k1, k2))
        assert all(w12[c] == w1[c] + w2[c] for c in w12)


def test_lex_key_indexing():
    t = fixture("triangle")
    assert lex_key(t, (1, 2, 3)) == (1, 2, 3)
    assert lex_key(t, (1, 2, 3), ["e3", "e1", "e2"]) == (3, 1, 2)

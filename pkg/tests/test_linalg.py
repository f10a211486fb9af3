import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from dgahh.linalg import (ZZ, ChainComplex, ExactMatrix, InvalidComplexError, PolyRing, PrimeField,
                          UnsupportedRingError, backend, homology_of_complex, rank, rank_kernel,
                          smith_normal_form, subquotient)
from dgahh.linalg.rings import ring_from_json, ring_to_json


def naive_rank_mod_p(rows, p):
    # dense Gaussian elimination, deliberately independent of the library
    a = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def sympy_factors(rows):
    if not rows or not rows[0]:
        return []
    return [abs(int(f)) for f in sympy_invariant_factors(Matrix(rows), domain=SZZ) if f != 0]


# -- examples ------------------------------------------------------------------

def test_identity_rank_over_f2():
    assert rank(ExactMatrix.identity(PrimeField(2), 2)) == 2


def test_zero_matrix_kernel_dimension():
    r, ker = rank_kernel(ExactMatrix.zeros(PrimeField(5), 3, 4))
    assert r == 0 and len(ker) == 4


def test_all_ones_over_f2():
    r, ker = rank_kernel(ExactMatrix.from_dense(PrimeField(2), [[1, 1], [1, 1]]))
    assert r == 1
    assert ker == [{0: 1, 1: 1}]


def test_kernel_vectors_are_in_kernel():
    F = PrimeField(7)
    m = ExactMatrix.from_dense(F, [[1, 2, 3, 4], [2, 4, 6, 1], [0, 0, 0, 5]])
    r, ker = rank_kernel(m)
    assert r + len(ker) == 4
    for v in ker:
        assert m.apply(v) == {}


def test_snf_examples():
    assert smith_normal_form(ExactMatrix.from_dense(ZZ, [[2]])).factors == [2]
    assert smith_normal_form(ExactMatrix.from_dense(ZZ, [[2, 0], [0, 4]])).factors == [2, 4]
    assert smith_normal_form(ExactMatrix.from_dense(ZZ, [[4, 0], [0, 6]])).factors == [2, 12]


def test_snf_big_integers_stay_exact():
    big = 2 ** 80 + 1
    s = smith_normal_form(ExactMatrix.from_dense(ZZ, [[big, 0], [0, big * 3]]))
    assert s.factors == [big, 3 * big]


def test_rank_needs_field():
    with pytest.raises(UnsupportedRingError):
        rank(ExactMatrix.identity(ZZ, 2))
    with pytest.raises(UnsupportedRingError):
        rank_kernel(ExactMatrix.identity(PolyRing(3), 2))


def test_stored_zeros_are_dropped():
    m = ExactMatrix(PrimeField(3), 2, 2, {(0, 0): 0, (1, 1): 1})
    assert m.entries == {(1, 1): 1}


def test_homology_of_multiplication_by_two():
    cx = ChainComplex(ZZ, {0: 1, 1: 1}, {1: ExactMatrix.from_dense(ZZ, [[2]])})
    H = homology_of_complex(cx)
    assert H[0].torsion == (2,) and H[0].free_rank == 0
    assert H[1].is_zero()


def test_homology_over_polynomial_ring():
    R = PolyRing(3)
    u = R.u()
    cx = ChainComplex(R, {-1: 1, 0: 2, 1: 1}, {
        0: ExactMatrix.from_dense(R, [[R.neg(u), u]]),
        1: ExactMatrix.from_dense(R, [[u], [u]]),
    })
    H = homology_of_complex(cx)
    assert H[-1].torsion == ((0, 1),)
    assert H[0].torsion == ((0, 1),)
    assert H[1].is_zero()
    assert str(H[0]) == "F_3"


def test_invalid_complex_names_degree():
    F = PrimeField(2)
    cx = ChainComplex(F, {0: 1, 1: 1, 2: 1}, {1: ExactMatrix.from_dense(F, [[1]]),
                                              2: ExactMatrix.from_dense(F, [[1]])})
    with pytest.raises(InvalidComplexError) as exc:
        homology_of_complex(cx)
    assert exc.value.degree == 1


def test_poly_ring_arithmetic():
    R = PolyRing(5)
    a = R.from_json([1, 2, 3])
    b = R.from_json([4, 1])
    q, r = R.divmod(a, b)
    assert R.add(R.mul(q, b), r) == a
    assert R.degree(r) < R.degree(b)
    assert R.fmt(R.u(2, 3)) == "3u^2"


def test_ring_json_round_trip():
    for R in (ZZ, PrimeField(7), PolyRing(3)):
        assert ring_from_json(ring_to_json(R)) == R


def test_subquotient_coordinates_ignore_boundaries():
    # 0 -> Z --(2)--> Z: H_0 = Z/2 generated by the basis vector
    d_out = ExactMatrix.zeros(ZZ, 0, 1)
    d_in = ExactMatrix.from_dense(ZZ, [[2]])
    sq = subquotient(d_out, d_in)
    assert sq.orders == [2]
    assert sq.coords([1]) == [1]
    assert sq.coords([3]) == [1]
    assert sq.coords([4]) == [0]


# -- oracles --------------------------------------------------------------------

@pytest.mark.parametrize("rows", [
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[0, 2, 0], [3, 0, 0], [0, 0, 0]],
    [[6, 10], [15, 9], [4, 4]],
])
def test_snf_matches_sympy(rows):
    assert smith_normal_form(ExactMatrix.from_dense(ZZ, rows)).factors == sympy_factors(rows)


@pytest.mark.parametrize("which", backend.available_backends())
def test_backends_match_naive_rank(which):
    rng = random.Random(5)
    for _ in range(40):
        p = rng.choice([2, 3, 5, 7])
        n, m = rng.randint(1, 9), rng.randint(1, 9)
        rows = [[rng.randint(-3, 3) if rng.random() < 0.4 else 0 for _ in range(m)] for _ in range(n)]
        vecs = [{j: v for j, v in enumerate(r) if v} for r in rows]
        # the kernel eliminates rows; rank is the same either way
        assert backend.fp_rank(vecs, m, p, which=which) == naive_rank_mod_p(rows, p)


# -- properties ------------------------------------------------------------------

int_matrices = st.integers(1, 5).flatmap(lambda n: st.integers(1, 5).flatmap(
    lambda m: st.lists(st.lists(st.integers(-20, 20), min_size=m, max_size=m), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_snf_transforms_reproduce_input(rows):
    M = ExactMatrix.from_dense(ZZ, rows)
    s = smith_normal_form(M)
    assert s.left @ M @ s.right == s.diag
    assert s.left_inv @ s.diag @ s.right_inv == M
    assert s.left @ s.left_inv == ExactMatrix.identity(ZZ, M.nrows)
    assert s.right @ s.right_inv == ExactMatrix.identity(ZZ, M.ncols)
    for a, b in zip(s.factors, s.factors[1:]):
        assert b % a == 0
    assert all(f > 0 for f in s.factors)


@settings(max_examples=150, deadline=None)
@given(int_matrices, st.sampled_from([2, 3, 5]))
def test_rank_mod_p_counts_factors_prime_to_p(rows, p):
    factors = smith_normal_form(ExactMatrix.from_dense(ZZ, rows)).factors
    Fm = ExactMatrix.from_dense(PrimeField(p), [[x % p for x in r] for r in rows])
    assert rank(Fm) == sum(1 for f in factors if f % p)


poly_matrices = st.integers(1, 3).flatmap(lambda n: st.integers(1, 3).flatmap(
    lambda m: st.lists(st.lists(st.lists(st.integers(0, 2), max_size=3), min_size=m, max_size=m),
                       min_size=n, max_size=n)))


@settings(max_examples=80, deadline=None)
@given(poly_matrices)
def test_poly_snf_transforms_and_divisibility(rows):
    R = PolyRing(3)
    M = ExactMatrix.from_dense(R, [[R.from_json(c) for c in r] for r in rows])
    s = smith_normal_form(M)
    assert s.left @ M @ s.right == s.diag
    assert s.left_inv @ s.diag @ s.right_inv == M
    for a, b in zip(s.factors, s.factors[1:]):
        assert R.divmod(b, a)[1] == ()
    assert all(f[-1] == 1 for f in s.factors)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["Z", "F3"]))
def test_contractible_summand_leaves_homology_unchanged(seed, ring_name):
    rng = random.Random(seed)
    R = ZZ if ring_name == "Z" else PrimeField(3)
    # C: Z^a --A--> Z^b with A random; add  Z --1--> Z in degrees (1, 0)
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    A = [[R.from_int(rng.randint(-4, 4)) for _ in range(a)] for _ in range(b)]
    C = ChainComplex(R, {0: b, 1: a}, {1: ExactMatrix.from_dense(R, A)})
    A2 = [row + [R.zero()] for row in A] + [[R.zero()] * a + [R.one()]]
    D = ChainComplex(R, {0: b + 1, 1: a + 1}, {1: ExactMatrix.from_dense(R, A2)})
    assert homology_of_complex(C, [0, 1]) == homology_of_complex(D, [0, 1])


def test_pure_python_fallback_is_selectable():
    import os
    import subprocess
    import sys
    env = dict(os.environ, DGAHH_PURE_PYTHON="1")
    code = ("from dgahh.linalg import backend; from dgahh.verify import check_hh_y2; "
            "print(backend.NAME, check_hh_y2().passed)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "True"]

from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dgahh.graded import (Generator, GradedAlgebraPresentation as GAP, GradedDims, ParityError,
                          PresentationError, PrimeMismatchError, divided_power_product, enumerate_basis,
                          format_monomial, multiply_monomials, parse_algebra, poincare_dims, tensor)


def monos(P, bound):
    return [format_monomial(P, m) for m, _ in enumerate_basis(P, bound)]


def test_exterior_times_divided_bound_six():
    P = GAP(2, [Generator("s", 1, 1, "exterior"), Generator("f", 2, 4, "dividedPower")])
    assert monos(P, 6) == ["1", "s", "f"]
    assert [st for _, st in enumerate_basis(P, 6)] == [(0, 0), (1, 1), (2, 4)]


def test_empty_presentation():
    assert monos(GAP(5, []), 10) == ["1"]
    assert poincare_dims(GAP(5, []), 3).as_list(0, 3) == [1, 0, 0, 0]


def test_divided_powers_by_total_degree():
    P = GAP(3, [Generator("t", 1, 1, "dividedPower")])
    assert monos(P, 5) == ["1", "t", "g2[t]"]
    assert [st for _, st in enumerate_basis(P, 6)] == [(0, 0), (1, 1), (2, 2), (3, 3)]


def test_divided_power_product_examples():
    assert divided_power_product(1, 1, 2) == 0
    assert divided_power_product(1, 2, 3) == 0
    for p in (2, 3, 5):
        for k in range(8):
            assert divided_power_product(0, k, p) == 1
    assert divided_power_product(1, 1, 3) == 2


def test_tensor_with_empty_is_identity():
    P = GAP(3, [Generator("x", 0, 2, "polynomial")])
    assert tensor(P, GAP(3, [])) == P


def test_tensor_prime_mismatch():
    with pytest.raises(PrimeMismatchError):
        tensor(GAP(2, []), GAP(3, []))


def test_exterior_times_divided_dims():
    P = GAP(3, [Generator("sx", 1, 2, "exterior"), Generator("fx", 2, 4, "dividedPower")])
    assert poincare_dims(P, 6).as_list(0, 6) == [1, 0, 0, 1, 0, 0, 1]


def test_gamma_times_exterior_dims():
    P = GAP(3, [Generator("st", 1, 1, "dividedPower"), Generator("sx", 1, 4, "exterior")])
    assert poincare_dims(P, 6).as_list(0, 6) == [1, 0, 1, 0, 1, 1, 1]


def test_gamma_y_exterior_z():
    P = parse_algebra("divided y 2; exterior z 3", 2)
    assert poincare_dims(P, 7).as_list(0, 7) == [1, 0, 1, 1, 1, 1, 1, 1]


def test_truncated_mu_at_three():
    P = parse_algebra("truncated mu 2 3", 3)
    assert poincare_dims(P, 6).as_list(0, 6) == [1, 0, 1, 0, 1, 0, 0]


def test_bigraded_dims_collapse():
    P = GAP(2, [Generator("s", 1, 1, "exterior"), Generator("f", 2, 4, "dividedPower")])
    bi = poincare_dims(P, 12, bigraded=True)
    assert bi[(3, 5)] == 1 and bi[(4, 8)] == 1
    assert bi.total() == poincare_dims(P, 12)


def test_parity_checks():
    with pytest.raises(ParityError):
        GAP(3, [Generator("x", 0, 2, "exterior")])
    GAP(2, [Generator("x", 0, 2, "exterior")])


def test_parse_even_exterior_at_odd_prime_is_truncated():
    P = parse_algebra("exterior x 2", 3)
    assert P.generators[0].kind == "truncatedPolynomial" and P.generators[0].m == 2


@pytest.mark.parametrize("text", ["exterior x", "bogus x 2", "truncated z 2 1", "poly x 2; poly x 4"])
def test_parse_rejects_bad_input(text):
    with pytest.raises(PresentationError):
        parse_algebra(text, 2)


def test_generator_validation():
    with pytest.raises(PresentationError):
        Generator("x", 0, 0, "polynomial")
    with pytest.raises(PresentationError):
        Generator("x", 0, 2, "exterior", 3)
    with pytest.raises(PresentationError):
        GAP(4, [])


def test_json_round_trip():
    P = parse_algebra("exterior x 3; truncated z 2 4; divided y 2", 5)
    assert GAP.from_json(P.dumps()) == P
    with pytest.raises(PresentationError):
        GAP.from_json({"prime": 3})


def test_odd_generators_anticommute():
    P = GAP(3, [Generator("a", 0, 1, "exterior"), Generator("b", 0, 3, "exterior")])
    assert multiply_monomials(P, (1, 0), (0, 1)) == (1, (1, 1))
    assert multiply_monomials(P, (0, 1), (1, 0)) == (2, (1, 1))
    assert multiply_monomials(P, (1, 0), (1, 0)) is None


# -- properties ---------------------------------------------------------------

kinds = st.sampled_from(["polynomial", "exterior", "dividedPower", "truncatedPolynomial"])


@st.composite
def presentations(draw, p=2, prefix="g"):
    n = draw(st.integers(0, 3))
    gens = []
    for i in range(n):
        kind = draw(kinds)
        s = draw(st.integers(0, 2))
        t = draw(st.integers(0 if s else 1, 4))
        m = draw(st.integers(2, 4)) if kind == "truncatedPolynomial" else None
        gens.append(Generator(f"{prefix}{i}", s, t, kind, m))
    return GAP(p, gens)


@settings(max_examples=100, deadline=None)
@given(presentations(prefix="a"), presentations(prefix="b"), st.integers(0, 12))
def test_tensor_dims_are_convolution(P1, P2, bound):
    lhs = poincare_dims(tensor(P1, P2), bound)
    rhs = poincare_dims(P1, bound).convolve(poincare_dims(P2, bound), bound)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(1, 4), st.integers(0, 20))
def test_divided_and_polynomial_dims_agree(s, t, bound):
    a = poincare_dims(GAP(3, [Generator("x", s, t, "dividedPower")]), bound, bigraded=True)
    b = poincare_dims(GAP(3, [Generator("x", s, t, "polynomial")]), bound, bigraded=True)
    assert a == b


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 12), st.integers(0, 12), st.integers(0, 12), st.sampled_from([2, 3, 5, 7]))
def test_divided_power_product_commutative_associative(i, j, k, p):
    f = divided_power_product
    assert f(i, j, p) == f(j, i, p) == comb(i + j, i) % p
    assert f(i, j, p) * f(i + j, k, p) % p == f(j, k, p) * f(i, j + k, p) % p

import random

import pytest
from hypothesis import given, settings, strategies as st

from dgahh.dga import (base_change_mod_p, builtin_endomorphism_dga, builtin_formal_polynomial, builtin_Y2, cone_dga,
                       dga_from_presentation, mod_p_reduction, tensor_dga, unit_dga)
from dgahh.graded import (GradedAlgebraPresentation as GAP, Generator, ParityError, PresentationError,
                          parse_algebra, poincare_dims)
from dgahh.hochschild import (HochschildDims, HochschildError, bar_dims_of_presentation, closed_form_dims,
                              closed_form_json, closed_form_table, cyclic_bar, hh_cohomology_dims, hh_dims,
                              hh_graded_closed_form)
from dgahh.linalg import PrimeField
from dgahh.verify import koszul_pair_dga, random_presentation


def kinds(Q):
    return [(g.kind, g.s, g.t) for g in Q.generators]


# -- bar complex ------------------------------------------------------------------

def test_unit_dga_bar_complex():
    B = cyclic_bar(unit_dga(), 3, 4)
    assert B.dims() == {0: 1}
    assert hh_dims(unit_dga(), 3, 4).as_list() == [1, 0, 0, 0, 0]


def test_y2_hh():
    h = hh_dims(builtin_Y2(), 2, 7)
    assert h.as_list(0, 6) == [1, 0, 1, 0, 0, 0, 1]


def test_formal_polynomial_hh():
    h = hh_dims(builtin_formal_polynomial(2, 9), 2, 8)
    assert h.as_list(0, 7) == [1, 0, 1, 1, 1, 1, 1, 1]


def test_bar_complex_squares_to_zero():
    # recompute d∘d explicitly from the stored block images
    B = cyclic_bar(mod_p_reduction(builtin_Y2(), 2), 2, 5, check=False)
    for key, imgs in B.images.items():
        tgt = B.target[key]
        nxt = B.images.get(tgt)
        if not nxt:
            continue
        for v in imgs:
            acc = {}
            for i, c in v.items():
                for k, e in nxt[i].items():
                    acc[k] = (acc.get(k, 0) + c * e) % 2
            assert not any(acc.values())


def test_even_exterior_at_three_matches_closed_form():
    P = parse_algebra("exterior x 2", 3)
    X = dga_from_presentation(P, 7)
    assert hh_dims(X, 3, 6).as_list() == closed_form_dims(P, 6).as_list(0, 6)
    assert kinds(hh_graded_closed_form(P)) == [("exterior", 1, 2), ("dividedPower", 2, 4)]


def test_augmentation_must_be_a_chain_map():
    # d(e1) = 2 is a unit mod 3, so F_3 is not a Y2-module through the augmentation
    with pytest.raises(HochschildError, match="augmentation"):
        hh_dims(builtin_Y2(), 3, 4)


def test_rejects_unsupported_inputs():
    with pytest.raises(HochschildError):
        hh_dims(builtin_endomorphism_dga(2), 2, 3)
    with pytest.raises(HochschildError):
        hh_dims(unit_dga(PrimeField(5)), 3, 3)
    with pytest.raises(HochschildError):
        hh_dims(unit_dga(), 2, -1)


def test_guaranteed_range_follows_model():
    X = builtin_formal_polynomial(2, 5)
    h = hh_dims(X, 2, 8)
    assert h.guaranteed_through == X.exact_through
    recs = h.records()
    assert recs[0] == {"input": X.name, "prime": 2, "degree": 0, "dimension": 1, "guaranteed": True}
    assert recs[-1]["guaranteed"] is False


def test_homology_dims_beyond_build_range():
    B = cyclic_bar(builtin_Y2(), 2, 3)
    with pytest.raises(HochschildError):
        B.homology_dims(4)


def test_cohomology_dims_match_homology():
    h = hh_dims(builtin_Y2(), 2, 6)
    c = hh_cohomology_dims(h)
    assert c.cohomological and c.as_list() == h.as_list()
    assert not h.cohomological
    assert hh_cohomology_dims(builtin_Y2(), 2, 6).as_list() == h.as_list()
    z = HochschildDims("zero", 2, 3, {}, 3)
    assert hh_cohomology_dims(z).as_list() == [0, 0, 0, 0]
    assert hh_cohomology_dims(HochschildDims("x", 3, 2, {0: 1, 2: 1}, 2)).as_list() == [1, 0, 1]


def test_table_and_json():
    h = hh_dims(builtin_Y2(), 2, 3)
    assert "HH_n(Y2; F_2)" in h.table()
    js = h.to_json()
    assert js["schema"] == 1 and len(js["records"]) == 4


# -- closed form -------------------------------------------------------------------

def test_closed_form_polynomial_odd_prime():
    for p in (3, 5):
        P = parse_algebra(f"polynomial x {2 * p - 2}", p)
        assert kinds(hh_graded_closed_form(P)) == [("exterior", 1, 2 * p - 2)]
        dims = closed_form_dims(P, 2 * p).as_list(0, 2 * p)
        assert [n for n, d in enumerate(dims) if d] == [0, 2 * p - 1]


def test_closed_form_truncated_at_two():
    P = parse_algebra("truncated xi 1 4", 2)
    assert kinds(hh_graded_closed_form(P)) == [("exterior", 1, 1), ("dividedPower", 2, 4)]


def test_closed_form_exterior_tensor_exterior_at_three():
    P = GAP(3, [Generator("t", 0, 1, "exterior"), Generator("x", 0, 4, "truncatedPolynomial", 2)])
    assert kinds(hh_graded_closed_form(P)) == [("dividedPower", 1, 1), ("exterior", 1, 4),
                                               ("dividedPower", 2, 8)]


def test_closed_form_parity_errors():
    with pytest.raises(ParityError):
        hh_graded_closed_form(GAP(3, [Generator("x", 0, 3, "polynomial")]))
    with pytest.raises(ParityError):
        hh_graded_closed_form(GAP(5, [Generator("x", 0, 1, "truncatedPolynomial", 3)]))
    with pytest.raises(PresentationError):
        hh_graded_closed_form(GAP(3, [Generator("g", 0, 2, "dividedPower")]))


def test_closed_form_renderings():
    P = parse_algebra("exterior x 2", 3)
    table = closed_form_table(P, 6)
    assert "Λ(sx) (1,2)" in table and "Γ(phi2x) (2,4)" in table
    assert table.splitlines()[-1] == "total: 1 0 0 1 0 0 1"
    js = closed_form_json(P, 6)
    assert [r["dimension"] for r in js["records"]] == [1, 0, 0, 1, 0, 0, 1]


# -- oracle equivalence and properties ---------------------------------------------------

@pytest.mark.parametrize("p,spec", [
    (2, "exterior t 1"), (2, "truncated x 2 3"), (2, "polynomial y 1; exterior t2 1"),
    (3, "exterior t 1; truncated x 4 3"), (3, "polynomial x 4"), (5, "truncated x 8 2; exterior z 9"),
])
def test_bar_matches_closed_form(p, spec):
    P = parse_algebra(spec, p)
    bar = bar_dims_of_presentation(P, 10)
    assert bar.as_list() == closed_form_dims(P, 10).as_list(0, 10)
    assert poincare_dims(hh_graded_closed_form(P), 10, bigraded=True).data == \
        {k: v for k, v in bar.bidims.items() if v}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]))
def test_random_presentations_match_closed_form(seed, p):
    P = random_presentation(random.Random(seed), p)
    assert bar_dims_of_presentation(P, 8).as_list() == closed_form_dims(P, 8).as_list(0, 8)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normalized_matches_unnormalized(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3])
    X = rng.choice([dga_from_presentation(random_presentation(rng, p), 6), koszul_pair_dga(p),
                    tensor_dga(koszul_pair_dga(p), cone_dga(0, PrimeField(p)))])
    assert hh_dims(X, p, 5).as_list() == hh_dims(X, p, 5, normalized=False).as_list()


def test_kunneth_on_y2_and_exterior():
    N = 6
    A = base_change_mod_p(builtin_Y2(), 2)
    B = dga_from_presentation(parse_algebra("exterior t 3", 2), N + 1)
    ha, hb = hh_dims(A, 2, N).as_list(), hh_dims(B, 2, N).as_list()
    conv = [sum(ha[i] * hb[n - i] for i in range(n + 1)) for n in range(N + 1)]
    assert hh_dims(tensor_dga(A, B), 2, N).as_list() == conv

import math

import pytest
from hypothesis import given, strategies as st

from hypergt.bounds import (all_bounds, bounds_csv, edge_count_cap, info_lower_bound,
                            intersection_lower_bound, s_stage_cost_estimate,
                            separable_lower_bound, trivial_two_stage_bound)
from hypergt.errors import PreconditionError

# Values computed beforehand with 50-digit mpmath arithmetic from the closed forms.
TRIVIAL_TWO_STAGE_20_10_4_1_2 = 136.259322080222872
SEPARABLE_10_1E6_6_5_125 = 5.439775394440432
COEFF_D8 = 1.647039460954215
BETA_FIRST = 244.645364561314       # e * 10 * 9
BETA_SECOND = 1406110.33            # e^5 (23/5)^6


@pytest.mark.parametrize("m,expected", [(1, 0), (2, 1), (3, 2), (10, 4), (1024, 10), (1025, 11)])
def test_info_lower_bound(m, expected):
    assert info_lower_bound(m) == expected


@given(st.integers(0, 60))
def test_info_lower_bound_powers(k):
    assert info_lower_bound(2 ** k) == k


def test_info_lower_bound_rejects_zero():
    with pytest.raises(PreconditionError):
        info_lower_bound(0)


def test_separable_value():
    rep = separable_lower_bound(10, 10 ** 6, 6, 5, 1.25)
    assert rep.applicable and not rep.clamped
    assert rep.value == pytest.approx(SEPARABLE_10_1E6_6_5_125, rel=1e-12)
    # structure: coefficient 5 / (2.5 log2(2e)) times log2(10^6 / 10^4)
    assert rep.value == pytest.approx(5 / (2.5 * math.log2(2 * math.e)) * math.log2(100))
    assert rep.tests == 6


def test_separable_clamped():
    rep = separable_lower_bound(100, 50, 6, 5, 1.25)
    assert rep.value == 0.0 and rep.clamped


@pytest.mark.parametrize("args", [
    (10, 1000, 10, 5, 1.0),     # d = 2v
    (10, 1000, 5, 5, 1.0),      # v = d
    (10, 1000, 6, 5, 1.5),      # c out of range
    (10, 1000, 6, 5, 0.9),
])
def test_separable_inapplicable(args):
    rep = separable_lower_bound(*args)
    assert not rep.applicable and rep.reason


def test_intersection_coefficient():
    rep = intersection_lower_bound(8 ** 8, 10 ** 80, 8, 7, 1.1)
    assert rep.extra["coefficient"] == pytest.approx(COEFF_D8, rel=1e-12)
    assert rep.extra["coefficient"] == pytest.approx(7 / math.log2(7 * math.e))
    lm = math.log2(10 ** 80)
    assert rep.extra["asymptotic"] == pytest.approx(max(COEFF_D8 * lm, lm))


def test_intersection_small_m():
    rep = intersection_lower_bound(100, 50, 6, 5, 1.25)
    assert rep.value == 0.0 and rep.clamped
    assert rep.extra["asymptotic"] is None and rep.extra["asymptotic_reason"]


def test_intersection_c_one_has_no_asymptotic_form():
    rep = intersection_lower_bound(10, 10 ** 9, 6, 5, 1.0)
    assert rep.applicable and rep.extra["asymptotic"] is None


def test_intersection_lambda_ge_d():
    assert not intersection_lower_bound(10, 1000, 4, 4, 1.2).applicable


def test_edge_count_cap():
    assert edge_count_cap(9, 3, 0) == 3
    assert edge_count_cap(6, 3, 2) == 20
    assert edge_count_cap(200, 50, 10) == math.comb(200, 11) // math.comb(50, 11)
    with pytest.raises(PreconditionError):
        edge_count_cap(9, 3, 3)


def test_s_stage_cost():
    assert s_stage_cost_estimate(64, 2 ** 10, 3, 1, 1) == pytest.approx(312)
    assert s_stage_cost_estimate(64, 2 ** 10, 6, 1, 1) == pytest.approx(504)
    assert s_stage_cost_estimate(7, 100, 1, 2.0, 3.0) == pytest.approx(2 * 7 * math.log2(100) + 21)


def test_trivial_two_stage():
    rep = trivial_two_stage_bound(20, 10, 4, 1, 2)
    assert rep.value == pytest.approx(TRIVIAL_TWO_STAGE_20_10_4_1_2, rel=1e-12)
    assert math.exp(rep.extra["ln_beta"]) == pytest.approx(BETA_FIRST, rel=1e-12)
    assert BETA_SECOND > BETA_FIRST
    assert rep.extra["chi_ge_sqrt_d"] is True


def test_trivial_two_stage_large_inputs_stay_finite():
    rep = trivial_two_stage_bound(10 ** 6, 10 ** 12, 200, 50, 20)
    assert math.isfinite(rep.value) and rep.value > 0


@pytest.mark.parametrize("args", [(20, 10, 4, 10, 2), (20, 10, 4, 0, 2), (20, 10, 4, 1, 0)])
def test_trivial_two_stage_inapplicable(args):
    assert not trivial_two_stage_bound(*args).applicable


def test_calculators_are_pure():
    a = trivial_two_stage_bound(20, 10, 4, 1, 2)
    b = trivial_two_stage_bound(20, 10, 4, 1, 2)
    assert a == b
    assert separable_lower_bound(10, 10 ** 6, 6, 5, 1.25) == separable_lower_bound(10, 10 ** 6, 6, 5, 1.25)


def test_all_bounds_csv():
    reps = all_bounds(n=10, m=10 ** 6, d=6, v=5, c=1.25)
    names = [r.name for r in reps]
    assert names[:3] == ["info", "separable", "intersection"]
    text = bounds_csv(reps)
    assert text.splitlines()[0] == "name,value,tests,reason,params"
    assert "missing lambda_bar" in text


def test_separable_bound_below_a_constructed_code():
    # all 3-subsets of [10]: m = 120 > n^(v/c) = 100 for v = 2, c = 1, so the bound is positive.
    # A certified 1-discard matrix separates a uniform edge set, so its length is an upper bound.
    from hypergt.codes import construct_discard_matrix, is_separable
    from hypergt.hypergraph import gen_random_uniform

    H = gen_random_uniform(10, 3, 120, seed=0)
    rep = separable_lower_bound(10, 120, 3, 2, 1.0)
    assert rep.value > 0.2
    M, _ = construct_discard_matrix(H, 3, 1, 0.05, seed=0)
    assert is_separable(M, H).certified
    assert rep.value <= M.t

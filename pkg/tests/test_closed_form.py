import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import random_table, rel_err, ulp_diff
from lifemoments import closed_form as cf
from lifemoments.closed_form import Method, ProductSpec
from lifemoments.errors import InsufficientTableError, OutOfRangeError, ZeroExposureError
from lifemoments.fractional_age import Assumption
from lifemoments.life_table import LifeTable
from lifemoments.products import Product, oracle_moment

BASE = ProductSpec(x=50, defer=2, term=7, i=0.03)

# frozen outputs of this implementation for the example contract
FROZEN = {
    (cf.term_insurance_moment, 1): 0.04443329572,
    (cf.term_insurance_moment, 2): 0.03771113764,
    (cf.lifetime_moment, 1): 0.3005404375,
    (cf.lifetime_moment, 2): 1.921943198,
    (cf.increasing_continuous_moment, 1): 0.2491289068,
    (cf.increasing_continuous_moment, 2): 1.284104197,
    (cf.increasing_annual_moment, 1): 0.2714841862,
    (cf.increasing_annual_moment, 2): 1.500031559,
}


@pytest.mark.parametrize("fn, m", list(FROZEN))
def test_frozen_values(table1, fn, m):
    res = fn(table1, replace(BASE, m=m))
    assert res.value == pytest.approx(FROZEN[fn, m], rel=1e-9)
    assert res.method is Method.CLOSED_FORM
    assert res.assumption is Assumption.CONSTANT_FORCE
    assert res.horizon == 59
    assert res.limit_branches_taken == 0


def test_monthly_frozen(table1):
    s = replace(BASE, j=12)
    assert cf.mthly_insurance_moment(table1, s).value == pytest.approx(0.04437858740, rel=1e-9)
    assert cf.mthly_insurance_moment(table1, replace(s, m=2)).value == pytest.approx(0.03761831250, rel=1e-9)
    assert cf.mthly_increasing_moment(table1, s).value == pytest.approx(3.011775082, rel=1e-9)
    assert cf.mthly_increasing_moment(table1, replace(s, m=2)).value == pytest.approx(187.4049192, rel=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_zero_interest_term_insurance(table1, m):
    s = replace(BASE, m=m, i=0.0)
    expected = (93048 - 88107) / 94058
    assert cf.term_insurance_moment(table1, s).value == pytest.approx(expected, rel=1e-14)


def test_lifetime_m0_exact(table1):
    s = replace(BASE, m=0)
    assert cf.lifetime_moment(table1, s).value == (table1.l(52) - table1.l(59)) / table1.l(50)
    # the summed general form agrees to rounding
    assert cf.lifetime_moment(table1, s, form="general").value == pytest.approx((93048 - 88107) / 94058, rel=1e-14)


def test_single_year_increasing_is_q(table1):
    s = ProductSpec(x=50, defer=0, term=1, i=0.0)
    assert cf.increasing_annual_moment(table1, s).value == pytest.approx(table1.one_year_q(50), rel=1e-14)


def test_decreasing_single_year_equals_term(table1):
    for m in (1, 2):
        s = ProductSpec(x=53, defer=0, term=1, i=0.03, m=m)
        assert cf.decreasing_annual_moment(table1, s).value == cf.term_insurance_moment(table1, s).value


def test_decreasing_zero_interest(table1):
    s = replace(BASE, i=0.0)
    exp = math.fsum((9 - k) * table1.k_year_p(50, k) * table1.one_year_q(50 + k) for k in range(2, 9))
    assert cf.decreasing_annual_moment(table1, s).value == pytest.approx(exp, rel=1e-13)


def test_decreasing_matches_oracle(table1):
    for m in (1, 2):
        s = replace(BASE, m=m)
        got = cf.decreasing_annual_moment(table1, s).value
        ref = oracle_moment(table1, Product.DECREASING_ANNUAL, s, Assumption.CONSTANT_FORCE).value
        assert rel_err(got, ref) < 1e-11


def test_mthly_j1_pays_at_year_end(table1):
    for m in (1, 2):
        s = replace(BASE, m=m, j=1)
        nu = 1 / 1.03
        exp = math.fsum(nu ** (m * (k + 1)) * table1.k_year_p(50, k) * table1.one_year_q(50 + k) for k in range(2, 9))
        assert cf.mthly_insurance_moment(table1, s).value == pytest.approx(exp, rel=1e-13)


def test_mthly_increasing_j1_is_annual_increasing(table1):
    for m in (1, 2, 3):
        s = replace(BASE, m=m, j=1)
        a = cf.mthly_increasing_moment(table1, s).value
        b = cf.increasing_annual_moment(table1, s).value
        assert a == pytest.approx(b, rel=1e-13)


def test_short_interval_prob_examples(table1):
    p = table1.one_year_p(50)
    assert cf.short_interval_prob(table1, 50, 0, 0, 12) == pytest.approx(1 - p ** (1 / 12), rel=1e-13)
    toy = LifeTable(0, (1.0, 0.8))
    v = cf.short_interval_prob(toy, 0, 0, 6, 12)
    assert v == pytest.approx(0.8**0.5 * (1 - 0.8 ** (1 / 12)), rel=1e-14)
    # 0.8^0.5 (1 - 0.8^(1/12)) = 0.0164785; a quoted 0.0164380 does not follow from the formula
    assert v == pytest.approx(0.0164785, abs=5e-8)
    with pytest.raises(ValueError):
        cf.short_interval_prob(toy, 0, 0, 12, 12)


def test_short_interval_prob_vs_survival_differences():
    from lifemoments.fractional_age import survival_fraction

    t = LifeTable(0, (1.0, 0.8, 0.55))
    for k in (0, 1):
        for d in range(12):
            a = survival_fraction(t, Assumption.CONSTANT_FORCE, 0, k + d / 12)
            b = survival_fraction(t, Assumption.CONSTANT_FORCE, 0, k + (d + 1) / 12)
            assert cf.short_interval_prob(t, 0, k, d, 12) == pytest.approx(a - b, rel=1e-12)


def test_telescoping(rng):
    worst = 0.0
    for _ in range(100):
        t = random_table(rng)
        x = t.base_age
        for k in range(len(t) - 1):
            for j in (1, 2, 4, 12, 52, 365):
                tot = math.fsum(cf.short_interval_prob(t, x, k, d, j) for d in range(j))
                exact = t.d(x + k) / t.l(x)
                worst = max(worst, ulp_diff(tot, exact))
    assert worst <= 4


def test_specialization_consistency_well_conditioned(rng):
    # log(1/p) and |log(nu^m p)| both >= 0.05: the expanded sums keep their digits here
    worst = 0.0
    for _ in range(200):
        t = random_table(rng, q_lo=0.05)
        n = len(t) - 1
        l = int(rng.integers(0, n))
        s = ProductSpec(x=t.base_age, defer=l, term=n - l, i=float(rng.uniform(0.0, 0.2)))
        for m in (1, 2):
            sm = replace(s, m=m)
            a = cf.lifetime_moment(t, sm, form="explicit").value
            b = cf.lifetime_moment(t, sm, form="general").value
            c = cf.increasing_continuous_moment(t, sm, form="explicit").value
            d = cf.increasing_continuous_moment(t, sm, form="general").value
            worst = max(worst, rel_err(a, b), rel_err(c, d))
    assert worst < 1e-12


def test_auto_form_avoids_cancellation(table1):
    # q ~ 0.005: the expanded m = 2 sum is good to ~1e-11 only; auto must match the gamma form
    s = ProductSpec(x=50, defer=0, term=1, m=2)
    auto = cf.lifetime_moment(table1, s).value
    assert auto == cf.lifetime_moment(table1, s, form="general").value
    assert rel_err(cf.lifetime_moment(table1, s, form="explicit").value, auto) > 1e-13


def test_mthly_converges_upward(table1):
    for s in (BASE, replace(BASE, m=2), ProductSpec(x=50, defer=0, term=9, i=0.03)):
        target = cf.term_insurance_moment(table1, s).value
        vals = [cf.mthly_insurance_moment(table1, replace(s, j=j)).value for j in (1, 2, 4, 12, 52, 365)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < target
        assert (target - vals[-1]) / target < 5e-4


OPS = [
    cf.term_insurance_moment,
    cf.lifetime_moment,
    cf.increasing_continuous_moment,
    cf.increasing_annual_moment,
]


@pytest.mark.parametrize("fn", OPS)
def test_deferment_additivity(fn, rng):
    for _ in range(50):
        t = random_table(rng, n_ages=int(rng.integers(4, 41)))
        n = len(t) - 1
        a = int(rng.integers(1, n))
        b = int(rng.integers(1, n - a + 1))
        s = ProductSpec(x=t.base_age, m=int(rng.integers(1, 5)), i=float(rng.uniform(-0.5, 0.2)))
        whole = fn(t, replace(s, defer=0, term=a + b)).value
        parts = fn(t, replace(s, defer=0, term=a)).value + fn(t, replace(s, defer=a, term=b)).value
        assert ulp_diff(whole, parts) <= 2 * (a + b)


def test_whole_life_needs_terminal_age(table1):
    s = ProductSpec(x=50, defer=2, i=0.03)
    with pytest.raises(InsufficientTableError):
        cf.term_insurance_moment(table1, s)
    forced = cf.term_insurance_moment(table1, replace(s, force_terminal=True))
    assert forced.value == cf.term_insurance_moment(table1, replace(s, term=7)).value
    assert forced.horizon == 59


def test_whole_life_horizon():
    t = LifeTable(0, (10.0, 8.0, 5.0, 1.0, 0.0, 0.0))
    r = cf.term_insurance_moment(t, ProductSpec(x=0, i=0.05))
    assert r.horizon == 4
    assert r.value == cf.term_insurance_moment(t, ProductSpec(x=0, term=4, i=0.05)).value
    # certain death in the last year: the p = 0 limit applies there
    assert r.limit_branches_taken == 1
    life = cf.lifetime_moment(t, ProductSpec(x=0, m=0)).value
    assert life == 1.0


def test_range_and_domain_errors(table1):
    with pytest.raises(OutOfRangeError):
        cf.term_insurance_moment(table1, ProductSpec(x=50, defer=2, term=8))
    with pytest.raises(OutOfRangeError):
        cf.term_insurance_moment(table1, ProductSpec(x=49, term=1))
    with pytest.raises(OutOfRangeError):
        cf.mthly_insurance_moment(table1, ProductSpec(x=50, defer=2, term=7, j=12, defer_periods=3))
    with pytest.raises(ZeroExposureError):
        cf.term_insurance_moment(LifeTable(0, (1.0, 0.0, 0.0)), ProductSpec(x=1, term=1))
    with pytest.raises(ValueError):
        cf.term_insurance_moment(table1, replace(BASE, m=0))
    with pytest.raises(ValueError):
        cf.decreasing_annual_moment(table1, ProductSpec(x=50, force_terminal=True))
    with pytest.raises(ValueError):
        ProductSpec(x=0, j=4, defer_periods=4)
    with pytest.raises(ValueError):
        ProductSpec(x=0, i=-1.0)
    with pytest.raises(ValueError):
        ProductSpec(x=0, m=21)
    with pytest.raises(ValueError):
        cf.increasing_continuous_moment(table1, replace(BASE, m=3), form="explicit")


def test_sub_year_deferment_matches_oracle(table1):
    for n1 in (1, 5, 11):
        s = ProductSpec(x=50, defer=2, term=6, i=0.03, j=12, defer_periods=n1)
        for product, fn in ((Product.MTHLY_INSURANCE, cf.mthly_insurance_moment), (Product.MTHLY_INCREASING, cf.mthly_increasing_moment)):
            for m in (1, 2):
                sm = replace(s, m=m)
                got = fn(table1, sm).value
                ref = oracle_moment(table1, product, sm, Assumption.CONSTANT_FORCE).value
                assert rel_err(got, ref) < 1e-11


def test_moment_order_cap(table1):
    s = replace(BASE, m=20)
    for fn in OPS:
        v = fn(table1, s).value
        assert math.isfinite(v) and v >= 0
    assert rel_err(
        cf.lifetime_moment(table1, s).value,
        oracle_moment(table1, Product.LIFETIME, s, Assumption.CONSTANT_FORCE).value,
    ) < 1e-10


def test_values_non_negative(rng):
    for _ in range(50):
        t = random_table(rng)
        s = ProductSpec(x=t.base_age, term=len(t) - 1, m=int(rng.integers(1, 5)), i=float(rng.uniform(-0.5, 0.2)), j=int(rng.integers(1, 13)))
        for fn in OPS + [cf.decreasing_annual_moment, cf.mthly_insurance_moment, cf.mthly_increasing_moment]:
            assert fn(t, s).value >= 0

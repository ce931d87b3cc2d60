import pytest

from branch_cases import CASES, P_NU, BranchCase, rate_for, table_from_p
from conftest import rel_err
from lifemoments import closed_form as cf
from lifemoments.closed_form import ProductSpec
from lifemoments.fractional_age import Assumption
from lifemoments.products import Product, oracle_moment

PRODUCT_OF = {
    cf.term_insurance_moment: Product.TERM_INSURANCE,
    cf.lifetime_moment: Product.LIFETIME,
    cf.increasing_continuous_moment: Product.INCREASING_CONTINUOUS,
    cf.increasing_annual_moment: Product.INCREASING_ANNUAL,
    cf.decreasing_annual_moment: Product.DECREASING_ANNUAL,
    cf.mthly_insurance_moment: Product.MTHLY_INSURANCE,
    cf.mthly_increasing_moment: Product.MTHLY_INCREASING,
}

ids = [c.name for c in CASES]


@pytest.mark.parametrize("case", CASES, ids=ids)
def test_branch_is_taken(case):
    assert case.degenerate().limit_branches_taken >= 1


@pytest.mark.parametrize("case", CASES, ids=ids)
def test_branch_value_matches_oracle(case):
    # the oracle knows nothing of the limit formulas: p = 0 years become atoms at the year start
    res = case.degenerate()
    p = {"p0": 0.0, "p1": 1.0, "vp1": P_NU}[case.kind]
    i = rate_for(1.0, P_NU, case.m) if case.kind == "vp1" else 0.03
    spec = ProductSpec(x=0, defer=1, term=1 if case.kind != "p1" else 2, m=case.m, i=i, j=case.j)
    ref = oracle_moment(table_from_p([0.9, p, 0.8, 0.7]), PRODUCT_OF[case.fn], spec, Assumption.CONSTANT_FORCE).value
    assert rel_err(res.value, ref) < 1e-11


@pytest.mark.parametrize("case", [c for c in CASES if c.kind != "p0"], ids=[c.name for c in CASES if c.kind != "p0"])
def test_linear_limits_are_continuous(case):
    assert case.worst_gap() < 1e-5


@pytest.mark.parametrize("case", [c for c in CASES if c.kind == "p0"], ids=[c.name for c in CASES if c.kind == "p0"])
def test_p0_gap_shrinks(case):
    base = case.degenerate().value
    gaps = []
    for p in (1e-6, 1e-30, 1e-120, 1e-299):
        near = case._eval(p, 0.03).value
        gaps.append(abs(near - base) / base)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    # approach rate ~ 1/log(1/p): at p = 1e-299 within 1e-2 for every product
    assert gaps[-1] < 1e-2


def test_i_zero_p0_term_insurance_is_continuous():
    c = BranchCase("t", cf.term_insurance_moment, 1, "p0")
    base = c.degenerate().value
    near = c._eval(1e-6, 0.0).value
    assert abs(near - c._eval(0.0, 0.0).value) / base < 1e-5


def test_threshold_switch_is_exact_limit():
    # |log(nu p)| just under the trigger: the limit value equals the direct quotient to ~1e-9
    table = table_from_p([0.9, P_NU, 0.8])
    spec_at = ProductSpec(x=0, defer=1, term=1, i=rate_for(1.0, P_NU, 1))
    spec_off = ProductSpec(x=0, defer=1, term=1, i=rate_for(1.0 + 2e-9, P_NU, 1))
    a = cf.term_insurance_moment(table, spec_at)
    b = cf.term_insurance_moment(table, spec_off)
    assert a.limit_branches_taken == 1 and b.limit_branches_taken == 0
    assert rel_err(a.value, b.value) < 1e-8

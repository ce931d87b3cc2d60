"""Product catalogue: maps each insurance product to its closed form, payoff and window."""

from __future__ import annotations

import math
from enum import Enum
from typing import Tuple

from . import closed_form as cf
from . import oracle
from .closed_form import Method, MomentResult, ProductSpec
from .fractional_age import Assumption
from .life_table import LifeTable


class Product(str, Enum):
    TERM_INSURANCE = "term-insurance"            # nu^{T}
    LIFETIME = "lifetime"                        # T
    INCREASING_CONTINUOUS = "increasing-continuous"  # T nu^T
    INCREASING_ANNUAL = "increasing-annual"      # ([T]+1) nu^T
    DECREASING_ANNUAL = "decreasing-annual"      # (n+l-[T]) nu^T
    MTHLY_INSURANCE = "mthly-insurance"          # nu^{([jT]+1)/j}
    MTHLY_INCREASING = "mthly-increasing"        # [jT+1] nu^T

    @property
    def uses_periods(self) -> bool:
        return self in (Product.MTHLY_INSURANCE, Product.MTHLY_INCREASING)


_CLOSED_FORMS = {
    Product.TERM_INSURANCE: cf.term_insurance_moment,
    Product.LIFETIME: cf.lifetime_moment,
    Product.INCREASING_CONTINUOUS: cf.increasing_continuous_moment,
    Product.INCREASING_ANNUAL: cf.increasing_annual_moment,
    Product.DECREASING_ANNUAL: cf.decreasing_annual_moment,
    Product.MTHLY_INSURANCE: cf.mthly_insurance_moment,
    Product.MTHLY_INCREASING: cf.mthly_increasing_moment,
}


def _check(product: Product, spec: ProductSpec) -> None:
    if spec.defer_periods and not product.uses_periods:
        raise ValueError(f"{product.value} has no sub-year deferment")


def payoff_for(product: Product, spec: ProductSpec) -> oracle.Payoff:
    product = Product(product)
    m, i, j = spec.m, spec.i, spec.j
    if product is Product.TERM_INSURANCE:
        return oracle.discount_payoff(m, i)
    if product is Product.LIFETIME:
        return oracle.power_payoff(m) if m else oracle.constant_payoff()
    if product is Product.INCREASING_CONTINUOUS:
        return oracle.increasing_continuous_payoff(m, i)
    if product is Product.INCREASING_ANNUAL:
        return oracle.increasing_annual_payoff(m, i)
    if product is Product.DECREASING_ANNUAL:
        if spec.whole_life:
            raise ValueError("a decreasing cover needs a finite term")
        return oracle.decreasing_annual_payoff(m, i, spec.defer + spec.term)
    if product is Product.MTHLY_INSURANCE:
        return oracle.mthly_insurance_payoff(m, i, j)
    return oracle.mthly_increasing_payoff(m, i, j)


def window_for(product: Product, spec: ProductSpec) -> Tuple[float, float]:
    """Coverage window [start, end) in years since issue."""
    start = float(spec.defer)
    if Product(product).uses_periods:
        start += spec.defer_periods / spec.j
    end = math.inf if spec.whole_life else start + spec.term
    return start, end


def closed_form(table: LifeTable, product: Product, spec: ProductSpec) -> MomentResult:
    product = Product(product)
    _check(product, spec)
    return _CLOSED_FORMS[product](table, spec)


def oracle_moment(
    table: LifeTable,
    product: Product,
    spec: ProductSpec,
    assumption: Assumption,
    tol: float = oracle.DEFAULT_TOL,
) -> MomentResult:
    product = Product(product)
    _check(product, spec)
    start, end = window_for(product, spec)
    value = oracle.expectation(
        table,
        Assumption(assumption),
        spec.x,
        payoff_for(product, spec),
        start,
        end,
        tol=tol,
        force_terminal=spec.force_terminal,
    )
    if math.isinf(end):
        omega = table.terminal_age()
        horizon = table.last_age if omega is None else omega
    else:
        horizon = spec.x + math.ceil(end)
    return MomentResult(value, Method.ORACLE, Assumption(assumption), horizon)


def compute(table: LifeTable, product: Product, spec: ProductSpec, assumption: Assumption) -> MomentResult:
    """Constant force goes through the closed forms, UDD and Balducci through the oracle."""
    assumption = Assumption(assumption)
    if assumption is Assumption.CONSTANT_FORCE:
        return closed_form(table, product, spec)
    return oracle_moment(table, product, spec, assumption)

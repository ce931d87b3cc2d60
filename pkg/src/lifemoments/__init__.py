"""Moments of life-insurance present values under fractional-age assumptions."""

from .closed_form import (
    Method,
    MomentResult,
    ProductSpec,
    decreasing_annual_moment,
    increasing_annual_moment,
    increasing_continuous_moment,
    lifetime_moment,
    mthly_increasing_moment,
    mthly_insurance_moment,
    short_interval_prob,
    term_insurance_moment,
)
from .errors import *  # noqa: F401,F403
from .fractional_age import Assumption, density, survival_fraction
from .gompertz import GompertzParams, discretize, exact_expectation, exact_moment
from .life_table import LifeTable, example_table, load_life_table
from .oracle import Monotonicity, Payoff, expectation, ordering_check
from .products import Product, compute
from .tables import build_table

__version__ = "0.1.0"

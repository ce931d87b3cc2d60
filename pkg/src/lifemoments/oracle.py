"""
Quadrature oracle.

Computes E[g(T_x) 1{start <= T_x < end}] by integrating g times the exact
per-year density of the chosen interpolation.  Panels never straddle an
integer age (the densities jump there) nor a 1/j boundary of a
piecewise-constant payoff.  It shares nothing with the closed forms
beyond the table lookups, so agreement between the two is meaningful.

Years in which nobody survives carry their whole death mass at the year
start under C and B; the oracle adds those atoms explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import InsufficientTableError, MixedMonotonicityError, OutOfRangeError, ZeroExposureError
from .fractional_age import Assumption, density_values, has_atom, year_data
from .life_table import LifeTable
from .quadrature import integrate_intervals

DEFAULT_TOL = 1e-12
DEFAULT_REL_TOL = 1e-14
MAX_PANELS = 2000


class Monotonicity(str, Enum):
    NON_INCREASING = "NonIncreasing"
    NON_DECREASING = "NonDecreasing"
    MIXED = "Mixed"


@dataclass(frozen=True)
class Payoff:
    """A payoff g(t), vectorised over numpy arrays.

    ``evaluator(t, piece)`` gets the time points and the index
    floor(j t) of the 1/j piece they lie in (j = ``pieces_per_year``);
    piecewise-constant payoffs read the piece index instead of flooring t,
    which keeps them exact at the piece edges.  ``monotonicity`` describes
    g within each year.
    """

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    monotonicity: Monotonicity = Monotonicity.MIXED
    pieces_per_year: int = 1

    def __call__(self, t, piece=None):
        t = np.asarray(t, dtype=float)
        if piece is None:
            piece = np.floor(t * self.pieces_per_year)
        return np.asarray(self.evaluator(t, piece), dtype=float) + 0.0 * t


def constant_payoff(c: float = 1.0) -> Payoff:
    return Payoff(lambda t, piece: np.full_like(t, c), Monotonicity.NON_INCREASING)


def discount_payoff(m: int, i: float) -> Payoff:
    """nu^{m t}."""
    log_nu = -math.log1p(i)
    mono = Monotonicity.NON_INCREASING if m * log_nu <= 0 else Monotonicity.NON_DECREASING
    return Payoff(lambda t, piece: np.exp(m * log_nu * t), mono)


def power_payoff(m: int) -> Payoff:
    """t^m."""
    return Payoff(lambda t, piece: t**m, Monotonicity.NON_DECREASING)


def increasing_continuous_payoff(m: int, i: float) -> Payoff:
    """(t nu^t)^m."""
    log_nu = -math.log1p(i)
    mono = Monotonicity.NON_DECREASING if log_nu >= 0 else Monotonicity.MIXED
    return Payoff(lambda t, piece: (t * np.exp(log_nu * t)) ** m, mono)


def increasing_annual_payoff(m: int, i: float) -> Payoff:
    """(([t]+1) nu^t)^m."""
    log_nu = -math.log1p(i)
    mono = Monotonicity.NON_INCREASING if log_nu <= 0 else Monotonicity.NON_DECREASING
    return Payoff(lambda t, piece: ((piece + 1.0) * np.exp(log_nu * t)) ** m, mono)


def decreasing_annual_payoff(m: int, i: float, end: int) -> Payoff:
    """((end - [t]) nu^t)^m."""
    log_nu = -math.log1p(i)
    mono = Monotonicity.NON_INCREASING if log_nu <= 0 else Monotonicity.NON_DECREASING
    return Payoff(lambda t, piece: ((end - piece) * np.exp(log_nu * t)) ** m, mono)


def mthly_insurance_payoff(m: int, i: float, j: int) -> Payoff:
    """nu^{m ([j t] + 1)/j}: paid at the end of the 1/j period of death."""
    log_nu = -math.log1p(i)
    return Payoff(lambda t, piece: np.exp(m * log_nu * (piece + 1.0) / j), Monotonicity.MIXED, j)


def mthly_increasing_payoff(m: int, i: float, j: int) -> Payoff:
    """(([j t] + 1) nu^t)^m: sum insured rising j times a year."""
    log_nu = -math.log1p(i)
    return Payoff(lambda t, piece: ((piece + 1.0) * np.exp(log_nu * t)) ** m, Monotonicity.MIXED, j)


def _end_of_life(table: LifeTable, x: int, force_terminal: bool) -> float:
    omega = table.terminal_age()
    if omega is None:
        if not force_terminal:
            raise InsufficientTableError("table never reaches zero survivors")
        omega = table.last_age
    return float(omega - x)


def expectation(
    table: LifeTable,
    assumption: Assumption,
    x: int,
    payoff: Payoff,
    l_start: float,
    l_end: float,
    tol: float = DEFAULT_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    force_terminal: bool = False,
) -> float:
    """E[g(T_x) 1{l_start <= T_x < l_end}] by adaptive quadrature.

    ``l_end`` may be ``math.inf`` for a whole-life horizon.  The error
    estimate per year is below max(tol, rel_tol * |year value|).
    """
    assumption = Assumption(assumption)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x not in table:
        raise OutOfRangeError(f"age {x} outside table")
    if table.l(x) == 0:
        raise ZeroExposureError(f"no survivors at age {x}")
    if math.isinf(l_end):
        l_end = max(l_start, _end_of_life(table, x, force_terminal))
    if l_start < 0 or l_end < l_start:
        raise OutOfRangeError("need 0 <= l_start <= l_end")
    if x + math.ceil(l_end) > table.last_age:
        raise OutOfRangeError(f"window ends at age {x + l_end}, table ends at {table.last_age}")

    j = payoff.pieces_per_year
    lo, hi, year_idx, pieces = [], [], [], []
    years = []
    atoms = []
    for k in range(math.floor(l_start), math.ceil(l_end)):
        yd = year_data(table, x, k)
        if yd.kp == 0:
            continue
        if has_atom(assumption, yd):
            if l_start <= k < l_end:
                atoms.append(yd.kp * float(payoff(np.array([float(k)]), np.array([float(k * j)]))[0]))
            continue
        idx = len(years)
        years.append(yd)
        for d in range(j):
            a = max(k + d / j, l_start)
            b = min(k + (d + 1) / j, l_end)
            if b > a:
                lo.append(a)
                hi.append(b)
                year_idx.append(idx)
                pieces.append(k * j + d)

    total = math.fsum(atoms)
    if not lo:
        return total

    kp = np.array([yd.kp for yd in years])
    k1p = np.array([yd.k1p for yd in years])
    q = np.array([yd.q for yd in years])
    log_p = np.array([yd.log_p for yd in years])
    k_arr = np.array([float(yd.k) for yd in years])
    year_idx = np.array(year_idx)
    piece_arr = np.array(pieces, dtype=float)

    def integrand(t, tag):
        yi = year_idx[tag]
        u = t - k_arr[yi]
        f = density_values(assumption, kp[yi], k1p[yi], q[yi], log_p[yi], u)
        return payoff(t, piece_arr[tag]) * f

    values, _ = integrate_intervals(
        integrand,
        np.array(lo),
        np.array(hi),
        tags=np.arange(len(lo)),
        abs_tol=tol,
        rel_tol=rel_tol,
        max_panels=max(MAX_PANELS // j, 8),
    )
    return math.fsum([total, *values.tolist()])


@dataclass(frozen=True)
class OrderingReport:
    udd: float
    constant_force: float
    balducci: float
    monotonicity: Monotonicity
    slack: float
    holds: bool

    @property
    def values(self) -> tuple:
        return self.udd, self.constant_force, self.balducci


def ordering_check(
    table: LifeTable,
    x: int,
    payoff: Payoff,
    l: int,
    n: int,
    tol: float = DEFAULT_TOL,
    monotonicity: Optional[Monotonicity] = None,
) -> OrderingReport:
    """Compare the three interpolations for a payoff monotone within years.

    Non-increasing g gives UDD <= C <= B and non-decreasing g the reverse,
    up to a slack of ten times the quadrature tolerance.
    """
    mono = Monotonicity(monotonicity or payoff.monotonicity)
    if mono is Monotonicity.MIXED:
        raise MixedMonotonicityError("payoff is not declared monotone within years")
    if int(l) != l or int(n) != n:
        raise ValueError("ordering holds for whole-year windows only")
    vals = [
        expectation(table, a, x, payoff, float(l), float(l + n), tol=tol)
        for a in (Assumption.UDD, Assumption.CONSTANT_FORCE, Assumption.BALDUCCI)
    ]
    scale = max(abs(v) for v in vals)
    slack = 10 * (tol * max(n, 1) + DEFAULT_REL_TOL * scale)
    udd, c, b = vals
    if mono is Monotonicity.NON_INCREASING:
        holds = udd <= c + slack and c <= b + slack
    else:
        holds = udd + slack >= c and c + slack >= b
    return OrderingReport(udd, c, b, mono, slack, holds)


def gamma_integrand_check(a: int, x_lo: float, tol: float = 1e-15) -> float:
    """int_{x_lo}^{x_lo+200} t^{a-1} e^{-t} dt by adaptive quadrature."""
    if int(a) != a or a < 1:
        raise ValueError("a must be a positive integer")
    edges = x_lo + np.arange(201, dtype=float)

    def f(t, tag):
        return t ** (a - 1) * np.exp(-t)

    values, _ = integrate_intervals(f, edges[:-1], edges[1:], abs_tol=tol, rel_tol=1e-15)
    return math.fsum(values.tolist())

"""
Gompertz survival law.

    s(u)    = exp(-(beta/alpha) (e^{alpha u} - 1))
    mu(u)   = beta e^{alpha u}
    f_0(u)  = mu(u) s(u)
    _kp_x   = exp(-(beta/alpha) e^{alpha x} (e^{alpha k} - 1))

The continuous law is both a source of discrete tables (sample s at
integer ages) and a benchmark: expectations against the exact density
need no interpolation at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import ProductSpec
from .life_table import LifeTable
from .oracle import DEFAULT_REL_TOL, DEFAULT_TOL, MAX_PANELS, Payoff
from .quadrature import integrate_intervals

EXAMPLE_ALPHA = 0.09
EXAMPLE_BETA = 0.0007
EXAMPLE_MAX_AGE = 140


@dataclass(frozen=True)
class GompertzParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("Gompertz alpha and beta must be positive")


EXAMPLE_PARAMS = GompertzParams(EXAMPLE_ALPHA, EXAMPLE_BETA)


def survival(params: GompertzParams, u):
    u = np.asarray(u, dtype=float)
    out = np.exp(-(params.beta / params.alpha) * np.expm1(params.alpha * u))
    return float(out) if out.ndim == 0 else out


def k_year_p(params: GompertzParams, x: int, k: int) -> float:
    if x < 0 or k < 0:
        raise ValueError("x and k must be non-negative")
    a, b = params.alpha, params.beta
    return math.exp(-(b / a) * math.exp(a * x) * math.expm1(a * k))


def force(params: GompertzParams, u):
    u = np.asarray(u, dtype=float)
    out = params.beta * np.exp(params.alpha * u)
    return float(out) if out.ndim == 0 else out


def density(params: GompertzParams, u):
    """Density of the newborn lifetime, f_0(u) = mu(u) s(u)."""
    u = np.asarray(u, dtype=float)
    a, b = params.alpha, params.beta
    e = np.exp(a * u)
    out = b * e * np.exp(-(b / a) * (e - 1.0))
    return float(out) if out.ndim == 0 else out


def discretize(params: GompertzParams, max_age: int = EXAMPLE_MAX_AGE, radix: float = 1.0) -> LifeTable:
    """Life table l_x = radix * s(x) for x = 0..max_age."""
    if max_age < 1:
        raise ValueError("max_age must be at least 1")
    if not radix > 0:
        raise ValueError("radix must be positive")
    ages = np.arange(max_age + 1, dtype=float)
    lx = radix * np.asarray(survival(params, ages))
    lx[0] = radix
    return LifeTable(base_age=0, survivors=tuple(lx.tolist()))


def truncation_age(params: GompertzParams, x: float, tol: float) -> float:
    """Age past x beyond which survival from x is below 1e-16 * tol."""
    a, b = params.alpha, params.beta
    target = -math.log(1e-16 * tol)
    # s(x+u)/s(x) = exp(-(b/a) e^{a x} (e^{a u} - 1)) = e^{-target}
    return math.log1p(target * a / (b * math.exp(a * x))) / a


def exact_expectation(
    params: GompertzParams,
    payoff: Payoff,
    l_start: float,
    l_end: float,
    tol: float = DEFAULT_TOL,
    x: int = 0,
) -> float:
    """E[g(T_x) 1{l_start <= T_x < l_end}] under the continuous law.

    An infinite ``l_end`` is cut where survival drops below 1e-16 * tol;
    the neglected mass is at most that survival value.
    """
    if math.isinf(l_end):
        l_end = max(l_start, math.ceil(truncation_age(params, x, tol)))
    if l_start < 0 or l_end < l_start:
        raise ValueError("need 0 <= l_start <= l_end")
    j = payoff.pieces_per_year
    lo, hi, pieces = [], [], []
    for k in range(math.floor(l_start), math.ceil(l_end)):
        for d in range(j):
            a = max(k + d / j, l_start)
            b = min(k + (d + 1) / j, l_end)
            if b > a:
                lo.append(a)
                hi.append(b)
                pieces.append(k * j + d)
    if not lo:
        return 0.0
    piece_arr = np.array(pieces, dtype=float)
    sx = survival(params, x)

    def integrand(t, tag):
        return payoff(t, piece_arr[tag]) * density(params, x + t) / sx

    values, _ = integrate_intervals(
        integrand,
        np.array(lo),
        np.array(hi),
        abs_tol=tol,
        rel_tol=DEFAULT_REL_TOL,
        max_panels=max(MAX_PANELS // j, 8),
    )
    return math.fsum(values.tolist())


def exact_moment(params: GompertzParams, product, spec: ProductSpec, tol: float = DEFAULT_TOL) -> float:
    """Product moment under the continuous law, the benchmark column."""
    from .products import payoff_for, window_for

    start, end = window_for(product, spec)
    return exact_expectation(params, payoff_for(product, spec), start, end, tol=tol, x=spec.x)

"""
Survival and density between integer ages.

Three interpolation laws connect s(x+k) and s(x+k+1) for 0 <= t <= 1:

    UDD:  s(x+k+t) = (1-t) s(x+k) + t s(x+k+1)          linear
    C:    s(x+k+t) = s(x+k) p_{x+k}^t                    geometric
    B:    1/s(x+k+t) = (1-t)/s(x+k) + t/s(x+k+1)         harmonic

The densities are piecewise on the open year intervals and jump at the
knots; at an integer argument the density of the year that starts there
is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BalducciDegenerateError, DegenerateYearError, OutOfRangeError
from .life_table import LifeTable


class Assumption(str, Enum):
    UDD = "UDD"
    CONSTANT_FORCE = "C"
    BALDUCCI = "B"

    @classmethod
    def parse(cls, text: str) -> "Assumption":
        key = text.strip().lower()
        aliases = {
            "udd": cls.UDD,
            "c": cls.CONSTANT_FORCE,
            "constantforce": cls.CONSTANT_FORCE,
            "constant_force": cls.CONSTANT_FORCE,
            "b": cls.BALDUCCI,
            "balducci": cls.BALDUCCI,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown assumption {text!r}") from None


@dataclass(frozen=True)
class YearData:
    """Survival quantities for the year (k, k+1) of a life aged x."""

    k: int
    kp: float       # _k p_x
    k1p: float      # _{k+1} p_x
    p: float        # p_{x+k}
    q: float        # q_{x+k}
    log_p: float    # log p_{x+k}, -inf when p = 0


def year_data(table: LifeTable, x: int, k: int) -> YearData:
    """Collect the probabilities for year k; the table must cover age x+k+1."""
    if x + k + 1 not in table or k < 0:
        raise OutOfRangeError(f"year {k} for age {x} needs ages up to {x + k + 1}")
    kp = table.k_year_p(x, k)
    k1p = table.k_year_p(x, k + 1)
    if table.l(x + k) == 0:
        return YearData(k, kp, k1p, p=0.0, q=1.0, log_p=-math.inf)
    lx = table.l(x + k)
    q = (lx - table.l(x + k + 1)) / lx
    return YearData(k, kp, k1p, p=table.one_year_p(x + k), q=q, log_p=table.log_one_year_p(x + k))


def _split(u: float) -> tuple:
    if u < 0 or not math.isfinite(u):
        raise OutOfRangeError(f"u = {u!r} must be finite and non-negative")
    k = math.floor(u)
    return int(k), u - k


def survival_fraction(table: LifeTable, assumption: Assumption, x: int, u: float) -> float:
    """_u p_x = s(x+u)/s(x) under the given interpolation."""
    k, t = _split(u)
    if t == 0:
        return table.k_year_p(x, k)
    yd = year_data(table, x, k)
    return float(_survival_in_year(assumption, yd, t))


def _survival_in_year(assumption: Assumption, yd: YearData, t):
    if assumption is Assumption.UDD:
        return (1.0 - t) * yd.kp + t * yd.k1p
    if assumption is Assumption.CONSTANT_FORCE:
        if yd.p == 0:
            return 0.0 * t
        return yd.kp * np.exp(t * yd.log_p)
    if yd.q == 1.0:
        raise BalducciDegenerateError(f"q = 1 in year {yd.k}")
    return yd.kp * yd.p / (1.0 - (1.0 - t) * yd.q)


def density(table: LifeTable, assumption: Assumption, x: int, t: float) -> float:
    """Conditional density f_x(t) of the future lifetime (right limit at knots)."""
    k, frac = _split(t)
    yd = year_data(table, x, k)
    return float(year_density(assumption, yd, frac))


def year_density(assumption: Assumption, yd: YearData, u):
    """Density f_x(k+u) for u in [0, 1); u may be a numpy array."""
    if assumption is Assumption.CONSTANT_FORCE and yd.p == 0:
        raise DegenerateYearError(f"p = 0 in year {yd.k}: all mass sits at the year start")
    if assumption is Assumption.BALDUCCI and yd.q == 1.0:
        raise BalducciDegenerateError(f"q = 1 in year {yd.k}")
    return density_values(assumption, yd.kp, yd.k1p, yd.q, yd.log_p, u)


def density_values(assumption: Assumption, kp, k1p, q, log_p, u):
    """Elementwise density over arrays of per-year quantities (no degeneracy checks)."""
    u = np.asarray(u, dtype=float)
    if assumption is Assumption.UDD:
        return (kp - k1p) + 0.0 * u
    if assumption is Assumption.CONSTANT_FORCE:
        return kp * np.exp(u * log_p) * (-log_p)
    denom = 1.0 - (1.0 - u) * q
    return k1p * q / (denom * denom)


def has_atom(assumption: Assumption, yd: YearData) -> bool:
    """True when the whole year's death mass sits at its start.

    Happens for C and B when nobody survives the year; UDD spreads the
    mass uniformly instead.
    """
    return assumption is not Assumption.UDD and yd.p == 0 and yd.kp > 0

"""
Closed-form moments under the constant force of mortality.

Between integer ages the survival curve is geometric, so every year
contributes an elementary integral of the form

    _kp_x log(1/p) int_k^{k+1} g(t) p^{t-k} dt

and each moment below is a finite sum of those per-year terms.  With
p = p_{x+k}, lam = log(1/p) and L = log(nu^m p):

    nu^{mT}                 nu^{mk} kp lam (e^L - 1)/L
    T^m                     kp lam * int_0^1 (k+s)^m e^{-lam s} ds
    (T nu^T)^m              kp lam nu^{mk} * int_0^1 (k+s)^m e^{L s} ds
    ([T]+1)^m nu^{mT}       (k+1)^m nu^{mk} kp lam (e^L - 1)/L
    (n+l-[T])^m nu^{mT}     (n+l-k)^m nu^{mk} kp lam (e^L - 1)/L

The last two integrals are (Gamma(m+1, k lam) - Gamma(m+1, (k+1) lam))
rescaled, see :func:`lifemoments.special.scaled_gamma_difference`.

Summands switch to their exact limits when p underflows (p < 1e-300)
or when |log(nu^m p)| (resp. |log p|) drops below 1e-9; each switch is
counted in ``MomentResult.limit_branches_taken``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from .errors import InsufficientTableError, OutOfRangeError, ZeroExposureError
from .fractional_age import Assumption, YearData, year_data
from .life_table import LifeTable
from .special import MAX_ORDER, scaled_gamma_difference

LOG_THRESHOLD = 1e-9
P_ZERO = 1e-300
MAX_MOMENT = MAX_ORDER - 1
# below this log(1/p) the explicit m = 1, 2 lifetime sums lose more than ~4 digits
EXPLICIT_MIN_LOG = 1e-2


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    ORACLE = "oracle"
    EXACT = "exact"


@dataclass(frozen=True)
class ProductSpec:
    """Contract parameters.

    ``term=None`` means whole life.  The deferment is ``defer`` whole years
    plus ``defer_periods`` periods of length 1/j.  ``force_terminal``
    treats the last tabulated age as the end of life when the table never
    reaches zero survivors.
    """

    x: int
    defer: int = 0
    term: Optional[int] = None
    m: int = 1
    i: float = 0.0
    j: int = 1
    defer_periods: int = 0
    force_terminal: bool = False

    def __post_init__(self):
        if self.defer < 0:
            raise ValueError("deferment must be non-negative")
        if self.term is not None and self.term < 1:
            raise ValueError("term must be at least one year")
        if self.j < 1:
            raise ValueError("j must be a positive integer")
        if not 0 <= self.defer_periods < self.j:
            raise ValueError("defer_periods must lie in 0..j-1")
        if not self.i > -1:
            raise ValueError("interest rate must exceed -1")
        if not 0 <= self.m <= MAX_MOMENT:
            raise ValueError(f"moment order must lie in 0..{MAX_MOMENT}")

    @property
    def nu(self) -> float:
        return 1.0 / (1.0 + self.i)

    @property
    def log_nu(self) -> float:
        return -math.log1p(self.i)

    @property
    def whole_life(self) -> bool:
        return self.term is None


@dataclass(frozen=True)
class MomentResult:
    value: float
    method: Method
    assumption: Optional[Assumption]
    horizon: int
    limit_branches_taken: int = 0

    def __float__(self) -> float:
        return self.value


@dataclass
class Window:
    """Years k = first .. last-1 of the coverage, plus an optional partial year."""

    first: int
    last: int
    horizon: int
    tail_year: Optional[int] = None
    years: List[YearData] = field(default_factory=list)
    tail: Optional[YearData] = None


def resolve_window(table: LifeTable, spec: ProductSpec, with_tail: bool = False) -> Window:
    """Work out which years a contract covers and collect their probabilities."""
    x, l = spec.x, spec.defer
    if x not in table:
        raise OutOfRangeError(f"issue age {x} outside table")
    if table.l(x) == 0:
        raise ZeroExposureError(f"no survivors at issue age {x}")

    if spec.whole_life:
        omega = table.terminal_age()
        if omega is None:
            if not spec.force_terminal:
                raise InsufficientTableError(
                    "table never reaches zero survivors; pass force_terminal to end it at "
                    f"age {table.last_age}"
                )
            omega = table.last_age
        n = max(0, omega - x - l)
        win = Window(first=l, last=l + n, horizon=x + l + n)
    else:
        n = spec.term
        need = x + l + n + (1 if with_tail else 0)
        if need > table.last_age:
            raise OutOfRangeError(f"contract needs ages up to {need}, table ends at {table.last_age}")
        win = Window(first=l, last=l + n, horizon=x + l + n)
        if with_tail:
            win.tail_year = l + n

    win.years = [year_data(table, x, k) for k in range(win.first, win.last)]
    if win.tail_year is not None:
        win.tail = year_data(table, x, win.tail_year)
    return win


def _expm1_ratio(z: float) -> float:
    """(e^z - 1)/z, equal to 1 at z = 0."""
    if z == 0:
        return 1.0
    return math.expm1(z) / z


class _Sum:
    """Compensated accumulator that also counts limit-branch activations."""

    def __init__(self):
        self.terms: List[float] = []
        self.branches = 0

    def add(self, value: float, branch: bool = False) -> None:
        self.terms.append(value)
        if branch:
            self.branches += 1

    def result(self, horizon: int) -> MomentResult:
        return MomentResult(
            value=math.fsum(self.terms),
            method=Method.CLOSED_FORM,
            assumption=Assumption.CONSTANT_FORCE,
            horizon=horizon,
            limit_branches_taken=self.branches,
        )


def _require_moment(spec: ProductSpec, allow_zero: bool = False) -> None:
    if spec.m < (0 if allow_zero else 1):
        raise ValueError("moment order must be at least 1 for this product")


# -- nu^{T} ---------------------------------------------------------------


def _discounted_year(yd: YearData, m: int, log_nu: float, acc: _Sum, weight: float = 1.0) -> None:
    """Add weight * int_k^{k+1} nu^{mt} f_x(t) dt."""
    k = yd.k
    if yd.kp == 0:
        acc.add(0.0)
        return
    disc = math.exp(m * k * log_nu) * yd.kp
    if yd.p < P_ZERO:
        acc.add(weight * disc, branch=True)
        return
    lam = -yd.log_p
    big_l = m * log_nu - lam
    if abs(big_l) < LOG_THRESHOLD:
        acc.add(weight * disc * lam, branch=True)
        return
    acc.add(weight * disc * lam * _expm1_ratio(big_l))


def term_insurance_moment(table: LifeTable, spec: ProductSpec) -> MomentResult:
    """E[nu^{mT} 1{l <= T < l+n}]."""
    _require_moment(spec)
    win = resolve_window(table, spec)
    acc = _Sum()
    for yd in win.years:
        _discounted_year(yd, spec.m, spec.log_nu, acc)
    return acc.result(win.horizon)


def increasing_annual_moment(table: LifeTable, spec: ProductSpec) -> MomentResult:
    """E[([T]+1)^m nu^{mT} 1{l <= T < l+n}]."""
    _require_moment(spec)
    win = resolve_window(table, spec)
    acc = _Sum()
    for yd in win.years:
        _discounted_year(yd, spec.m, spec.log_nu, acc, weight=float(yd.k + 1) ** spec.m)
    return acc.result(win.horizon)


def decreasing_annual_moment(table: LifeTable, spec: ProductSpec) -> MomentResult:
    """E[((n+l-[T]) nu^T)^m 1{l <= T < l+n}]; needs a finite term."""
    _require_moment(spec)
    if spec.whole_life:
        raise ValueError("a decreasing cover needs a finite term")
    win = resolve_window(table, spec)
    end = spec.defer + spec.term
    acc = _Sum()
    for yd in win.years:
        _discounted_year(yd, spec.m, spec.log_nu, acc, weight=float(end - yd.k) ** spec.m)
    return acc.result(win.horizon)


# -- T^m ------------------------------------------------------------------


def _lifetime_general(yd: YearData, m: int) -> float:
    lam = -yd.log_p
    return yd.kp * lam * scaled_gamma_difference(m + 1, yd.k, lam)


def _lifetime_m1(yd: YearData) -> float:
    lam = -yd.log_p
    k, p, q = yd.k, yd.p, yd.q
    return yd.kp * (q + (k * q - p) * lam) / lam


def _lifetime_m2(yd: YearData) -> float:
    lp = yd.log_p
    k, p, q = yd.k, yd.p, yd.q
    num = 2 * q - 2 * (q * k - p) * lp + (k * k - (1 + k) ** 2 * p) * lp * lp
    return yd.kp * num / (lp * lp)


def lifetime_moment(table: LifeTable, spec: ProductSpec, form: str = "auto") -> MomentResult:
    """E[T^m 1{l <= T < l+n}].

    ``form="explicit"`` evaluates the polynomial-logarithm sums for
    m = 1, 2 everywhere; they cancel like 1/lam^m as p -> 1.  ``"auto"``
    uses them only where lam >= ``EXPLICIT_MIN_LOG`` and the closed
    probability difference for m = 0; ``"general"`` always goes through
    the incomplete gamma function.
    """
    _require_moment(spec, allow_zero=True)
    if form not in ("auto", "general", "explicit"):
        raise ValueError(f"unknown form {form!r}")
    if form == "explicit" and spec.m not in (1, 2):
        raise ValueError("explicit forms exist only for m = 1, 2")
    win = resolve_window(table, spec)
    m = spec.m
    if m == 0 and form == "auto":
        x = spec.x
        value = (table.l(x + win.first) - table.l(x + win.last)) / table.l(x)
        return MomentResult(value, Method.CLOSED_FORM, Assumption.CONSTANT_FORCE, win.horizon)

    acc = _Sum()
    for yd in win.years:
        lam = -yd.log_p
        explicit = form == "explicit" or (form == "auto" and lam >= EXPLICIT_MIN_LOG)
        if yd.kp == 0:
            acc.add(0.0)
        elif yd.p < P_ZERO:
            acc.add(float(yd.k) ** m * yd.kp, branch=True)
        elif lam < LOG_THRESHOLD:
            acc.add(0.0, branch=True)
        elif m == 0:
            acc.add(yd.kp * yd.q)
        elif explicit and m == 1:
            acc.add(_lifetime_m1(yd))
        elif explicit and m == 2:
            acc.add(_lifetime_m2(yd))
        else:
            acc.add(_lifetime_general(yd, m))
    return acc.result(win.horizon)


# -- (T nu^T)^m -----------------------------------------------------------


def _increasing_general(yd: YearData, m: int, log_nu: float) -> float:
    lam = -yd.log_p
    lam_tilde = lam - m * log_nu  # log(1/(nu^m p))
    return yd.kp * lam * math.exp(m * yd.k * log_nu) * scaled_gamma_difference(m + 1, yd.k, lam_tilde)


def _increasing_m1(yd: YearData, log_nu: float) -> float:
    k, p = yd.k, yd.p
    nu = math.exp(log_nu)
    ln_vp = log_nu + yd.log_p
    # 1 - nu p taken as -expm1(log(nu p)); the rest is as written
    num = -math.expm1(ln_vp) + (-k + (k + 1) * nu * p) * ln_vp
    return yd.kp * (-yd.log_p) * math.exp(k * log_nu) * num / (ln_vp * ln_vp)


def _increasing_m2(yd: YearData, log_nu: float) -> float:
    k, p = yd.k, yd.p
    nu2 = math.exp(2 * log_nu)
    big_l = 2 * log_nu + yd.log_p
    inner = (2 * k - 2 * p * (1 + k) * nu2) + (-k * k + p * (1 + k) ** 2 * nu2) * big_l
    bracket = (2 * math.expm1(big_l) + big_l * inner) / big_l**3
    return yd.kp * (-yd.log_p) * math.exp(2 * k * log_nu) * bracket


def increasing_continuous_moment(table: LifeTable, spec: ProductSpec, form: str = "general") -> MomentResult:
    """E[(T nu^T)^m 1{l <= T < l+n}].

    ``form="explicit"`` evaluates the expanded m = 1 and m = 2 sums
    instead of the incomplete gamma form; they are algebraically equal but
    lose digits when nu^m p is close to 1.
    """
    _require_moment(spec)
    if form not in ("general", "explicit"):
        raise ValueError(f"unknown form {form!r}")
    if form == "explicit" and spec.m > 2:
        raise ValueError("explicit forms exist only for m = 1, 2")
    win = resolve_window(table, spec)
    m, log_nu = spec.m, spec.log_nu
    acc = _Sum()
    for yd in win.years:
        k = yd.k
        if yd.kp == 0:
            acc.add(0.0)
        elif yd.p < P_ZERO:
            acc.add(math.exp(m * k * log_nu) * float(k) ** m * yd.kp, branch=True)
        elif -yd.log_p < LOG_THRESHOLD:
            acc.add(0.0, branch=True)
        elif abs(m * log_nu + yd.log_p) < LOG_THRESHOLD:
            window = ((k + 1) ** (m + 1) - k ** (m + 1)) / (m + 1)
            acc.add(yd.kp * (-yd.log_p) * math.exp(m * k * log_nu) * window, branch=True)
        elif form == "explicit" and m == 1:
            acc.add(_increasing_m1(yd, log_nu))
        elif form == "explicit":
            acc.add(_increasing_m2(yd, log_nu))
        else:
            acc.add(_increasing_general(yd, m, log_nu))
    return acc.result(win.horizon)


# -- 1/j-thly products ----------------------------------------------------


def short_interval_prob(table: LifeTable, x: int, k: int, d: int, j: int) -> float:
    """P(k + d/j <= T_x < k + (d+1)/j) under constant force."""
    if j < 1 or not 0 <= d < j:
        raise ValueError("need j >= 1 and 0 <= d < j")
    yd = year_data(table, x, k)
    return _piece_prob(yd, d, j)


def _piece_prob(yd: YearData, d: int, j: int) -> float:
    if yd.p == 0:
        return yd.kp if d == 0 else 0.0
    return yd.kp * math.exp(d / j * yd.log_p) * -math.expm1(yd.log_p / j)


def _pieces(win: Window, spec: ProductSpec):
    """(year data, first piece, end piece) triples covering the window."""
    n1, j = spec.defer_periods, spec.j
    for yd in win.years:
        yield yd, (n1 if yd.k == win.first else 0), j
    if win.tail is not None and n1 > 0:
        yield win.tail, 0, n1


def mthly_insurance_moment(table: LifeTable, spec: ProductSpec) -> MomentResult:
    """E[nu^{m([jT]+1)/j} 1{l*n1 <= T < n + l*n1}]."""
    _require_moment(spec)
    win = resolve_window(table, spec, with_tail=spec.defer_periods > 0 and not spec.whole_life)
    m, j, log_nu = spec.m, spec.j, spec.log_nu
    acc = _Sum()
    for yd, d0, d1 in _pieces(win, spec):
        k = yd.k
        if yd.kp == 0:
            continue
        if yd.p < P_ZERO:
            if d0 == 0:
                acc.add(math.exp(m * (k + 1 / j) * log_nu) * yd.kp, branch=True)
            continue
        one_minus = -math.expm1(yd.log_p / j)
        for d in range(d0, d1):
            acc.add(math.exp(m * (k + (d + 1) / j) * log_nu + d / j * yd.log_p) * yd.kp * one_minus)
    return acc.result(win.horizon)


def mthly_increasing_moment(table: LifeTable, spec: ProductSpec) -> MomentResult:
    """E[([jT]+1)^m nu^{mT} 1{l*n1 <= T < n + l*n1}]."""
    _require_moment(spec)
    win = resolve_window(table, spec, with_tail=spec.defer_periods > 0 and not spec.whole_life)
    m, j, log_nu = spec.m, spec.j, spec.log_nu
    acc = _Sum()
    for yd, d0, d1 in _pieces(win, spec):
        k = yd.k
        if yd.kp == 0:
            continue
        disc = math.exp(m * k * log_nu) * yd.kp
        if yd.p < P_ZERO:
            if d0 == 0:
                acc.add(float(j * k + 1) ** m * disc, branch=True)
            continue
        lam = -yd.log_p
        big_l = m * log_nu + yd.log_p
        degenerate = abs(big_l) < LOG_THRESHOLD
        # lam (e^{L/j} - 1)/L, tending to lam/j as L -> 0
        piece = lam / j if degenerate else lam * _expm1_ratio(big_l / j) / j
        for d in range(d0, d1):
            growth = 1.0 if degenerate else math.exp(d / j * big_l)
            acc.add(float(d + j * k + 1) ** m * disc * piece * growth, branch=degenerate and d == d0)
    return acc.result(win.horizon)

"""
Upper incomplete gamma function for positive integer order.

For integer a the defining integral has the exact finite form

    Gamma(a, x) = (a-1)! e^{-x} sum_{k=0}^{a-1} x^k / k!

The moment formulas need differences Gamma(a, k*lam) - Gamma(a, (k+1)*lam)
divided by lam^a e^{-k lam}.  Subtracting two finite sums loses every
digit when lam is small, so :func:`scaled_gamma_difference` evaluates the
same quantity through the unit-interval integrals

    J_r(h) = int_0^1 s^r e^{-h s} ds

which are sums of same-signed terms for any real h.
"""

from __future__ import annotations

import math

from .errors import GammaOverflowError

MAX_ORDER = 21  # moment order m <= 20 needs Gamma(m+1, .)
FACTORIALS = tuple(float(math.factorial(n)) for n in range(MAX_ORDER + 1))

_SERIES_EPS = 1e-17
_MAX_TERMS = 100_000


def _check_order(a: int) -> None:
    if int(a) != a or a < 1:
        raise ValueError(f"order must be a positive integer, got {a!r}")
    if a > MAX_ORDER:
        raise GammaOverflowError(f"order {a} exceeds supported maximum {MAX_ORDER}")


def upper_gamma_int(a: int, x: float) -> float:
    """Gamma(a, x) for integer a >= 1 and finite x >= 0."""
    _check_order(a)
    if not (x >= 0 and math.isfinite(x)):
        raise ValueError(f"x must be finite and non-negative, got {x!r}")
    if x < 700.0:
        term, total = 1.0, 1.0
        for k in range(1, a):
            term *= x / k
            total += term
        return FACTORIALS[a - 1] * math.exp(-x) * total
    # e^{-x} underflows before the polynomial overflows; work in logs
    log_x = math.log(x)
    total = 0.0
    for k in range(a):
        total += math.exp(-x + k * log_x - math.lgamma(k + 1))
    return FACTORIALS[a - 1] * total


def unit_moment(r: int, h: float) -> float:
    """J_r(h) = int_0^1 s^r exp(-h s) ds for integer r >= 0 and real h."""
    if h > r + 40:
        # r!/h^{r+1} (1 - P(Poisson(h) <= r)); the Poisson tail is below 1e-8
        log_h = math.log(h)
        tail = math.fsum(math.exp(-h + j * log_h - math.lgamma(j + 1)) for j in range(r + 1))
        return FACTORIALS[r] / h ** (r + 1) * (1.0 - tail)
    if h >= 0:
        # e^{-h} sum_n h^n / ((r+1)(r+2)...(r+1+n)): lower-gamma series
        term = 1.0 / (r + 1)
        total = term
        n = 0
        while n < _MAX_TERMS:
            n += 1
            term *= h / (r + 1 + n)
            total += term
            if term <= _SERIES_EPS * total:
                break
        return math.exp(-h) * total
    # sum_n |h|^n / (n! (n+r+1)), all terms positive
    g = -h
    power = 1.0
    total = 1.0 / (r + 1)
    n = 0
    while n < _MAX_TERMS:
        n += 1
        power *= g / n
        term = power / (n + r + 1)
        total += term
        if term <= _SERIES_EPS * total:
            break
    return total


def scaled_gamma_difference(a: int, k: int, lam: float) -> float:
    """(Gamma(a, k lam) - Gamma(a, (k+1) lam)) / (lam^a e^{-k lam}).

    Equals int_0^1 (k+s)^{a-1} e^{-lam s} ds, so it stays finite at
    lam = 0 (value ((k+1)^a - k^a)/a) and for negative lam, where the
    finite-sum continuation of Gamma(a, .) applies.
    """
    _check_order(a)
    n = a - 1
    total = 0.0
    for r in range(n + 1):
        total += math.comb(n, r) * float(k) ** (n - r) * unit_moment(r, lam)
    return total


def gamma_difference(a: int, x: float, y: float) -> float:
    """Gamma(a, x) - Gamma(a, y) for 0 <= x <= y without cancellation."""
    _check_order(a)
    if not 0 <= x <= y:
        raise ValueError("need 0 <= x <= y")
    h = y - x
    if h == 0:
        return 0.0
    # substitute t = x + h s and expand (x + h s)^{a-1}
    n = a - 1
    total = 0.0
    for r in range(n + 1):
        total += math.comb(n, r) * x ** (n - r) * h**r * unit_moment(r, h)
    return h * math.exp(-x) * total

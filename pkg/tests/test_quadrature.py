import math

import numpy as np
import pytest

from lifemoments.errors import NonConvergentError
from lifemoments.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate, integrate_intervals


def test_rule_weights():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, rel=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, rel=1e-15)
    assert np.all(np.diff(NODES) > 0)


def test_polynomials_exact():
    # K15 integrates degree 22 exactly
    for deg in range(0, 23, 3):
        assert integrate(lambda t: t**deg, 0.0, 1.0) == pytest.approx(1 / (deg + 1), rel=1e-14)


def test_smooth_functions():
    assert integrate(np.exp, 0.0, 1.0) == pytest.approx(math.e - 1, rel=1e-14)
    assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-14)
    assert integrate(lambda t: 1 / (1 + t * t), 0.0, 1.0) == pytest.approx(math.pi / 4, rel=1e-14)


def test_peaked_integrand_refines():
    # Balducci-like peak 1/(1 - (1-u) q)^2 with q close to 1
    q = 0.999
    exact = 1 / (1 - q) - 1.0
    val = integrate(lambda u: q / (1 - (1 - u) * q) ** 2, 0.0, 1.0, abs_tol=1e-12)
    assert val == pytest.approx(exact, rel=1e-12)


def test_many_intervals_tags():
    lo = np.arange(5, dtype=float)
    hi = lo + 1
    vals, errs = integrate_intervals(lambda t, tag: np.broadcast_to(tag + 1.0, t.shape), lo, hi)
    assert vals == pytest.approx([1.0, 2.0, 3.0, 4.0, 5.0], rel=1e-15)
    assert np.all(errs >= 0)


def test_empty_input():
    vals, errs = integrate_intervals(lambda t, tag: t, [], [])
    assert vals.size == 0 and errs.size == 0


def test_non_finite_integrand():
    with pytest.raises(NonConvergentError):
        integrate(lambda t: 1 / t, 0.0, 1.0)


def test_budget_exhausted():
    with pytest.raises(NonConvergentError):
        integrate(lambda t: np.sign(t - 1 / 3), 0.0, 1.0, abs_tol=1e-300, rel_tol=0.0, max_panels=50)

"""Exception hierarchy shared by every module in the package."""


class LifeMomentsError(Exception):
    """Base class for all errors raised by lifemoments."""


class MalformedCsvError(LifeMomentsError, ValueError):
    pass


class NonMonotoneError(LifeMomentsError, ValueError):
    pass


class NonConsecutiveAgesError(LifeMomentsError, ValueError):
    pass


class EmptyTableError(LifeMomentsError, ValueError):
    pass


class OutOfRangeError(LifeMomentsError, IndexError):
    """An age or year window falls outside the tabulated ages."""


class ZeroExposureError(LifeMomentsError, ZeroDivisionError):
    """Conditioning on an age with no survivors."""


class InsufficientTableError(LifeMomentsError):
    """Whole-life horizon requested on a table that never reaches zero survivors."""


class DegenerateYearError(LifeMomentsError):
    """Pointwise density does not exist (constant force with p = 0)."""


class BalducciDegenerateError(LifeMomentsError):
    """Balducci interpolation is undefined for a year with q = 1."""


class NonConvergentError(LifeMomentsError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""


class MixedMonotonicityError(LifeMomentsError, ValueError):
    """Ordering check requested for a payoff that is not declared monotone."""


class GammaOverflowError(LifeMomentsError, OverflowError):
    """Incomplete gamma order beyond the supported factorial table."""

"""Exception hierarchy shared by the library and the CLI."""


class BellRayError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BellRayError, ValueError):
    """Argument outside the domain where the function is defined."""


class RegionError(DomainError):
    """An asymptotic formula was requested outside its region of validity."""


class TransitionSingularityError(RegionError):
    """``LW(n/x) + 1`` is too close to zero for the outer formulas."""


class PrecisionError(BellRayError, ArithmeticError):
    """The working precision needed exceeds the configured maximum."""


class ResourceLimitError(BellRayError, MemoryError):
    """Refused to allocate a table above the configured ceiling."""


class PhiOverflowError(BellRayError, OverflowError):
    """The outer exponential overflows a double.

    ``exponent`` holds the (real part of the) exponent so callers can fall
    back to log-domain arithmetic.
    """

    def __init__(self, exponent, message=None):
        self.exponent = exponent
        super().__init__(message or f"exp overflow, exponent={exponent!r}")

"""Exception types raised by the public API."""


class CouponLabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstanceError(CouponLabError, ValueError):
    """A problem instance or configuration violates its invariants."""


class InvalidStateError(CouponLabError, ValueError):
    """A state, count, or index argument is outside its valid range."""


class HorizonTooSmallError(CouponLabError, ValueError):
    """A truncation horizon is too short to contain any completion mass."""


class OracleRangeError(CouponLabError, ValueError):
    """The inclusion-exclusion oracle was asked for an album size it does not support."""


class InvalidTrialError(CouponLabError, ValueError):
    """A trial index for a geometric law is below 1."""


class InvalidProbabilityError(CouponLabError, ValueError):
    """A probability argument lies outside its required open or half-open interval."""


class CostOverflowError(CouponLabError, OverflowError):
    """A cost in integer cents would exceed the 64-bit range."""

"""Exception types shared across the package."""


class PointregError(Exception):
    """Base class for all package errors."""


class NormalizationError(PointregError):
    """Kernel cannot be normalized (zero or non-finite integral)."""


class DomainError(PointregError):
    """Argument outside its mathematical domain (e.g. eps <= 0)."""


class InterpolationRangeError(PointregError):
    """Tabulated kernel queried outside its table."""


class IntegrationError(PointregError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best available estimate so callers can decide whether a
    degraded value is still usable.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ConditioningError(PointregError):
    """Ill-conditioned fit design (too few samples or too small a span)."""


class PoleError(PointregError):
    """Closed-form expansion has a pole at the requested exponent."""


class RegimeError(PointregError):
    """(a, eps) pair violates the eps << a regime contract."""


class ConfigError(PointregError):
    """Invalid run configuration."""

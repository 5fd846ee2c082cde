"""Exception types shared across the package."""


class TelesumError(Exception):
    """Base class for all errors raised by telesum."""


class DomainError(TelesumError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class TruncationError(TelesumError, ArithmeticError):
    """An infinite series did not converge within the allowed number of terms."""

    def __init__(self, message, terms=None, last_ratio=None):
        super().__init__(message)
        self.terms = terms
        self.last_ratio = last_ratio


class QuadratureError(TelesumError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, value=None, abs_error_estimate=None):
        super().__init__(message)
        self.value = value
        self.abs_error_estimate = abs_error_estimate


class InversionError(TelesumError, ArithmeticError):
    """Numeric Fourier inversion did not settle at the requested tolerance."""

"""Exception types raised across the package."""


class WVAError(Exception):
    """Base class for all package errors."""


class DomainError(WVAError, ValueError):
    """An argument lies outside the domain of the model (e.g. gamma <= 0)."""


class DegeneratePostSelectionError(WVAError):
    """Post-selection probability fell below the configured floor."""

    def __init__(self, probability, floor):
        self.probability = probability
        self.floor = floor
        super().__init__(
            f"post-selection probability {probability:.3e} is below floor {floor:.1e}"
        )


class NoOptimumError(WVAError):
    """No interior optimum exists (e.g. zero splitting)."""


class NumericError(WVAError, ArithmeticError):
    """Non-finite integrand values or a quadrature that failed to converge."""

    def __init__(self, message, **diagnostics):
        self.diagnostics = diagnostics
        if diagnostics:
            detail = ", ".join(f"{k}={v!r}" for k, v in diagnostics.items())
            message = f"{message} ({detail})"
        super().__init__(message)


class ConvergenceError(NumericError):
    """An iterative method exhausted its iteration budget."""


class PumpCeilingError(DomainError):
    """Requested event rate exceeds the lifetime-limited ceiling 1/T1."""


class NoEventsError(WVAError):
    """A Monte Carlo trial retained zero events."""

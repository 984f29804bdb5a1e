"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of a formula."""


class SingularityError(DomainError):
    """The refractive index sits on the n = 1 pole, where field amplitudes diverge."""


class DegenerateError(DomainError):
    """A denominator in the network algebra vanishes."""


class ConsistencyError(ArithmeticError):
    """Two equivalent routes to the same quantity disagree."""


class NumericalBlowupError(FloatingPointError):
    """The field solver produced a non-finite value."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite field value at step {step}")


class RegimeWarning(UserWarning):
    """Inputs are valid but outside the usual matter-wave regime (n > 1)."""

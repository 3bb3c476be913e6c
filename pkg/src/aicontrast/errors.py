"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the formula."""


class IntegrationError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes
    ----------
    estimate : float
        Best integral estimate obtained before giving up.
    error_bound : float
        Accumulated error estimate for ``estimate``.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class OptimizationError(ArithmeticError):
    """The compensation-factor search could not bracket a maximum."""

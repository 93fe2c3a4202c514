"""Exception types shared across the package."""


class DomainError(ValueError):
    """Arguments outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """A query outside the range covered by tabulated data."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    estimate : complex or None
        Best value obtained before giving up.
    error : float
        Achieved error estimate.
    """

    def __init__(self, message, estimate=None, error=float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class RootNotFoundError(RuntimeError):
    """No sign change found while bracketing a root.

    ``scan`` holds the ``(z, f(z))`` pairs that were evaluated.
    """

    def __init__(self, message, scan=()):
        super().__init__(message)
        self.scan = list(scan)

"""Exception types shared across the package."""


class NumericError(RuntimeError):
    """A numerical routine failed to converge.

    Carries a ``residual`` estimate when the failing routine can produce one.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class QuadratureError(NumericError):
    """Adaptive quadrature did not reach the requested tolerance."""

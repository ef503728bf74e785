"""Exception types shared across the library."""


class PrecisionError(ArithmeticError):
    """A series or quadrature cannot reach the requested accuracy in float64."""


class ConvergenceError(RuntimeError):
    """An iterative scheme (root find, quadrature, truncation) did not converge."""


class ResolutionError(ValueError):
    """The supplied grid is too coarse for the realization it must resolve."""


class InstabilityError(RuntimeError):
    """Field values exceeded the stability cap during time stepping."""


class FitError(ValueError):
    """An envelope/growth fit was requested on an invalid window."""

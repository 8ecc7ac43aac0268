"""Exception hierarchy shared across the package."""


class EnvlabError(Exception):
    """Base class for all envlab errors."""


class InvalidInputError(EnvlabError):
    """Malformed input data (non-monotone grid, bad shapes, NaNs, ...)."""


class InvalidParameterError(EnvlabError):
    """A scalar parameter is outside its allowed range."""


class UnboundedTransformError(EnvlabError):
    """Legendre transform requested at slopes where the supremum is infinite."""


class NoEnvelopeError(EnvlabError):
    """The competitor class for an envelope is empty."""


class ConvergenceError(EnvlabError):
    """An iterative computation exhausted its budget.

    Carries the residual reached when the budget ran out.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PrecisionError(EnvlabError):
    """A quadrature did not reach the requested accuracy.

    Carries the best estimate achieved.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InvalidCoverError(EnvlabError):
    """A collection of chart boxes fails to cover the working interval."""


class GluingError(EnvlabError):
    """Dominance precondition for gluing fails; names the worst grid point."""

    def __init__(self, message, worst_point=None):
        super().__init__(message)
        self.worst_point = worst_point

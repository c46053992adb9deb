"""Exception types shared across the package."""


class CubeError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(CubeError, ValueError):
    """A vertex or vertex set does not belong to the cube it was used with."""


class PreconditionError(CubeError, ValueError):
    """An operation was called on input outside its domain."""


class InvalidHeightFunction(PreconditionError):
    """A labeling violates the |f(u) - f(v)| = 1 edge constraint."""


class BudgetExceeded(CubeError):
    """An exhaustive computation would exceed its size or memory budget.

    ``required`` carries the estimated cost (state count, set count, ...)
    when one is available.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required

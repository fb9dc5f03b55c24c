"""Exception types shared across the package.

The CLI maps these onto stable exit codes, so library code should raise
them rather than bare ValueError/RuntimeError for contract violations.
"""


class PreconditionError(ValueError):
    """An input violates a documented precondition (wrong shape, not unitary, ...)."""


class NumericalFailure(RuntimeError):
    """A numerical routine could not reach its documented tolerance.

    Carries the residual that was actually achieved.
    """

    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (achieved residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class ConvergenceFailure(RuntimeError):
    """An iterative optimizer failed to meet its constraint tolerance."""

    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (best endpoint residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual

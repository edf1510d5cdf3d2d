"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: validation failures
exit 2, numeric range failures and solver non-convergence exit 3.
"""


class ValidationError(ValueError):
    """A precondition on user-supplied parameters is violated."""


class RegimeError(ValidationError):
    """Parameters fall outside the regime where an explicit constant is finite."""


class NumericRangeError(ArithmeticError):
    """A requested computation would overflow or lose all precision."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

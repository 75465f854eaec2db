"""Exception hierarchy shared across the package."""


class InfoValueError(Exception):
    """Base class for all package errors."""


class ProblemError(InfoValueError, ValueError):
    """Invalid decision problem, belief, measure or problem file.

    ``line`` is the 1-based line of the offending entry when the problem was
    read from a file.
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        if line is not None:
            message = f"{source or '<problem>'}:{line}: {message}"
        super().__init__(message)


class AffineValueError(InfoValueError):
    """The value function is affine (fewer than two undominated actions)."""


class BudgetCapError(InfoValueError):
    """An information budget reaches the full-information cap.

    Budgets must stay strictly below the smallest amount at which the
    decision maker already attains the full-information value.
    """


class InfeasibleBudgetError(InfoValueError):
    """No distribution on the grid carries the requested amount."""


class BoundaryPriorError(InfoValueError):
    """The prior lies on the boundary between decision regions."""


class UnsupportedError(InfoValueError):
    """Instance shape outside what an operation supports."""

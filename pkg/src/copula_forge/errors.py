"""Exception hierarchy shared by all modules."""


class CopulaForgeError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CopulaForgeError, ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(CopulaForgeError, ValueError):
    """An array has the wrong shape (structural, not a constraint violation)."""


class ConstraintError(CopulaForgeError, ValueError):
    """Input violates a defining constraint (row sums, copula axioms, ...)."""


class CapacityError(CopulaForgeError):
    """The requested size exceeds a documented capacity limit."""


class NotBistochasticError(ConstraintError):
    """Raised by the Birkhoff decomposition when no perfect matching exists.

    The residual matrix at the point of failure is kept in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual

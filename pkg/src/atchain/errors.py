"""Exception types shared across the package."""


class AtchainError(Exception):
    """Base class for all package-specific errors."""


class ArgumentError(AtchainError, ValueError):
    """An argument is malformed or out of range."""


class CapacityError(AtchainError):
    """The request exceeds a hard size cap (state spaces grow like n!)."""


class ModeError(AtchainError):
    """An operation was asked to run in the wrong numeric mode."""


class PreconditionError(AtchainError):
    """A mathematical precondition of the operation does not hold."""


class StructureError(AtchainError):
    """Extracted data violates the structure it is required to have."""


class ConvergenceError(AtchainError):
    """An iterative solver ran out of budget.

    The partially converged report, when one exists, is attached as
    ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial

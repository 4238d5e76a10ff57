"""Exception types shared across the package."""


class FieldChannelError(Exception):
    """Base class for all package errors."""


class NotHermitian(FieldChannelError):
    """A matrix expected to be Hermitian violates the symmetry tolerance."""


class InvalidState(FieldChannelError):
    """A density matrix violates trace or positivity tolerances."""


class DimensionMismatch(FieldChannelError):
    """An operand has the wrong dimension for the requested operation."""


class BadParameter(FieldChannelError):
    """A configuration parameter is outside its allowed range."""


class QuadratureFailure(FieldChannelError):
    """Numerical integration could not reach the requested tolerance."""

    def __init__(self, message: str, achieved_error: float | None = None):
        super().__init__(message)
        self.achieved_error = achieved_error

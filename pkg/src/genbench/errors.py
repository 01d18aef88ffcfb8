"""Exception types shared across the benchmark engine."""


class GenbenchError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(GenbenchError):
    """Input data violates a documented precondition."""


class InsufficientSamplesError(InvalidInputError):
    """Too few samples to compute the requested statistic."""


class DimensionMismatchError(InvalidInputError):
    """Operands have incompatible shapes."""


class NotPSDError(InvalidInputError):
    """A covariance matrix has a significantly negative eigenvalue."""


class ValidationError(GenbenchError):
    """A manifest, config file, or on-disk artifact failed validation."""


class RunFailedError(GenbenchError):
    """An adapter process exited abnormally."""

    def __init__(self, message: str, stdout: str = "", stderr: str = ""):
        super().__init__(message)
        self.stdout = stdout
        self.stderr = stderr


class IncompleteRunError(ValidationError):
    """A run produced a different sample set than was planned."""

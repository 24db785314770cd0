"""Exception hierarchy shared across the package."""


class QvarschedError(Exception):
    """Base class for all package errors."""


class MalformedBitstringError(QvarschedError):
    """Bitstring has the wrong length or contains characters other than 0/1."""


class UnboundParameterError(QvarschedError):
    """A circuit was executed with at least one named parameter left unbound."""


class QubitCountExceededError(QvarschedError):
    """Requested register is larger than the configured maximum."""


class DimensionMismatchError(QvarschedError):
    """State and operator act on registers of different sizes."""


class NonFiniteObjectiveError(QvarschedError):
    """Objective function returned NaN or infinity."""


class InstanceMismatchError(QvarschedError):
    """Measurement counts and oracle report belong to different instances."""


class ParseError(QvarschedError):
    """Problem or experiment file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

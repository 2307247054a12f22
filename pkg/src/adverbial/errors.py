"""Shared exception types.

Everything raised on bad input data derives from DataError so the CLI can
map it to exit code 1 uniformly.
"""


class DataError(Exception):
    """Invalid or inconsistent input data."""


class ObservationError(DataError):
    """Malformed observation file or detection record."""


class AspParseError(DataError):
    """Malformed program text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemeError(DataError):
    """Invalid bucket scheme configuration."""


class InsufficientDataError(DataError):
    """Not enough samples to run an operation."""


class EmbeddingError(DataError):
    """Malformed word-vector file."""

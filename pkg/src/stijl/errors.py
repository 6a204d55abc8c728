"""Exception types shared across the package."""


class StijlError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(StijlError, ValueError):
    """Malformed input text (matrix files, tree files, generator specs)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BoundsError(StijlError, ValueError):
    """A tile or index lies outside the structure it refers to."""


class ContainmentError(StijlError, ValueError):
    """A child tile is not contained in its parent tile."""


class CountConsistencyError(StijlError, ValueError):
    """Claimed counts exceed what the parent tile has available."""


class DimensionMismatchError(StijlError, ValueError):
    """A tree and a matrix disagree about the data dimensions."""

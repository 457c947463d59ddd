"""Exception hierarchy shared across the package.

The CLI maps :class:`ParseError` to exit code 2 and :class:`ValidationError`
to exit code 3, so every domain failure derives from one of the two.
"""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed input text. Carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnresolvedReference(ParseError):
    pass


class DuplicateId(ParseError):
    pass


class ValidationError(ValueError):
    """Well-formed input that violates a domain constraint."""


class DimensionMismatch(ValidationError):
    pass


class BackendMismatch(ValidationError):
    pass


class NotAnObservable(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class UnknownEdge(ValidationError):
    pass


class NonCommutingFace(ValidationError):
    pass


class NonScalarFace(ValidationError):
    pass


class NotEigenstate(ValidationError):
    pass


class InvalidVolume(ValidationError):
    pass


class UnpairedEdge(ValidationError):
    pass


class ImageNotAFace(ValidationError):
    pass


class GaugeError(ValidationError):
    pass


class CyclicTemporalOrder(ValidationError):
    pass


class GuardExceeded(ValidationError):
    pass


class BoundaryNotClosed(ValidationError):
    """A surface that should be a relative cycle has nonzero boundary."""

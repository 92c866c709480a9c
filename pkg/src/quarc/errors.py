"""Exception types shared across the package."""
from __future__ import annotations


class QuarcError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QuarcError):
    """A domain object violates one of its invariants."""


class ParseError(QuarcError):
    """A text input was rejected; always carries a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"

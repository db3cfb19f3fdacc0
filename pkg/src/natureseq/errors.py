"""Shared exception types.

Every toolkit error derives from :class:`ToolkitError` so callers (CLI,
service) can catch one base class and map it to a diagnostic with a stable
``code`` (the class name).
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class TokenizeError(ToolkitError):
    """Input text contains a character the tokenizer cannot consume."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class PrecisionError(ToolkitError):
    """Numeric literal does not carry exactly four fraction digits."""


class StructureError(ToolkitError):
    """Boundary tokens are unbalanced or improperly nested."""


class ParseError(ToolkitError):
    """A structured text input is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

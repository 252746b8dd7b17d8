"""Runtime error types raised while executing ItemScript."""

from __future__ import annotations

from enum import Enum


class ErrorKind(Enum):
    UNSUPPORTED_API = "UnsupportedApi"
    BUDGET_EXCEEDED = "BudgetExceeded"
    TYPE_MISMATCH = "TypeMismatch"
    STATE_OVERFLOW = "StateOverflow"
    ARITY_MISMATCH = "ArityMismatch"


class ScriptError(Exception):
    """Error raised by script execution.

    `path` is set for UnsupportedApi and names the offending member,
    e.g. "$.setAmbientLight".  Positions are 1-based source coordinates
    of the node that failed.
    """

    def __init__(self, kind: ErrorKind, message: str, line: int = 0,
                 column: int = 0, path: str | None = None):
        super().__init__(f"{kind.value}: {message} (line {line}, column {column})")
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        # console lines the failed run produced before stopping; filled
        # in by instantiate/dispatch so callers can still report them
        self.console_lines: list[str] = []


class StateCodecError(Exception):
    """Raised when a state blob cannot be encoded or decoded."""

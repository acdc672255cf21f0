from __future__ import annotations


class MatchParityError(RuntimeError):
    """Base error; `code` is a short machine-readable tag used in notes and exit paths."""

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code:
            self.code = code


class RegionParseError(MatchParityError):
    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column


class PreconditionError(MatchParityError):
    code = "precondition"


class UnsupportedInputError(MatchParityError):
    code = "unsupported_input"


class CapExceededError(MatchParityError):
    code = "cap_exceeded"


class ColoringError(MatchParityError):
    code = "missing_coloring"


class UnbalancedError(MatchParityError):
    code = "unbalanced"


class InvariantError(MatchParityError):
    code = "invariant_failed"

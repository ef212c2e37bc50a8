# coding: utf-8
from typing import Optional

__all__ = [
    'ReconfigToolError',
    'MalformedInputError',
    'ParseError',
    'UnsupportedFormError',
    'BudgetExceededError',
    'PreconditionError',
    'NotParallelizableError',
    'NonBinarySourceError',
    'MissingHonestProofError',
    'CodeMismatchError',
]


class ReconfigToolError(Exception):
    def __init__(self, message: str):
        self.failure_msg = message
        super().__init__(message)


class MalformedInputError(ReconfigToolError, ValueError):
    pass


class ParseError(MalformedInputError):
    @classmethod
    def format(
        cls, msg: str, *, line_no: int, field: Optional[str] = None
    ) -> 'ParseError':
        where = f"line {line_no}"
        if field is not None:
            where += f", field '{field}'"
        return ParseError(f"{where}: {msg}", line_no=line_no, field=field)

    def __init__(
        self, msg: str, *, line_no: int, field: Optional[str] = None
    ):
        self.line_no = line_no
        self.field = field
        super().__init__(msg)


class UnsupportedFormError(ReconfigToolError):
    pass


class BudgetExceededError(ReconfigToolError):
    @classmethod
    def format(cls, *, what: str, size: int, limit: int):
        msg = (
            f"Enumerating {what} requires {size} items, "
            f"which exceeds the configured budget of {limit}."
        )
        return BudgetExceededError(msg, what=what, size=size, limit=limit)

    def __init__(self, msg: str, *, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(msg)


class PreconditionError(ReconfigToolError):
    pass


class NotParallelizableError(PreconditionError):
    pass


class NonBinarySourceError(PreconditionError):
    pass


class MissingHonestProofError(PreconditionError):
    pass


class CodeMismatchError(PreconditionError):
    pass

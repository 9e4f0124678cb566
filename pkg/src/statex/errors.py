"""Exception hierarchy shared by all statex modules."""

from __future__ import annotations


class StatexError(Exception):
    """Base class for every error raised by statex."""


class DataError(StatexError, ValueError):
    """Input data could not be interpreted."""


class EmptyInput(DataError):
    pass


class UnknownLabel(DataError):
    def __init__(self, row: int, col: int, text: str) -> None:
        self.row = row
        self.col = col
        self.text = text
        super().__init__(f"unknown cell label {text!r} at ({row}, {col})")


class ShapeMismatch(DataError):
    def __init__(self, expected: tuple[int, int], actual: tuple[int, int]) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"shape mismatch: expected {expected}, got {actual}")


class MalformedRecords(DataError):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"malformed records: {reason}")


class SizeLimit(StatexError):
    pass


class EmptyBatch(DataError):
    pass


class MissingGroundTruth(DataError):
    def __init__(self, table_id: str) -> None:
        self.table_id = table_id
        super().__init__(f"no ground truth for {table_id!r}")


class InferenceError(StatexError):
    """Base class for remote inference failures."""


class NetworkError(InferenceError):
    pass


class HttpStatus(InferenceError):
    def __init__(self, code: int, body: str = "") -> None:
        self.code = code
        self.body = body
        super().__init__(f"endpoint returned HTTP {code}")


class InferenceTimeout(InferenceError):
    pass

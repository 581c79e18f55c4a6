"""Exception types raised by tracklike.

Every error the package raises on bad input derives from TracklikeError,
so callers (notably the CLI) can catch one base class and map it to a
nonzero exit code.
"""

from __future__ import annotations


class TracklikeError(Exception):
    """Base class for all tracklike errors."""


def _where(path) -> str:
    return f" in {path}" if path else ""


# --- dataset / CSV ingestion ---


class MissingColumn(TracklikeError):
    def __init__(self, column: str, path=None):
        self.column = column
        self.path = path
        super().__init__(f"missing required column '{column}'{_where(path)}")


class NonNumericCell(TracklikeError):
    def __init__(self, row: int, column: str, path=None):
        self.row = row
        self.column = column
        self.path = path
        super().__init__(
            f"non-numeric value in column '{column}' at data row {row}{_where(path)}"
        )


class BadLabel(TracklikeError):
    def __init__(self, row: int, value=None, path=None):
        self.row = row
        self.value = value
        self.path = path
        shown = "" if value is None else f" (got {value!r})"
        super().__init__(f"label at data row {row} is not 0 or 1{shown}{_where(path)}")


class EmptyDataset(TracklikeError):
    def __init__(self, path=None):
        self.path = path
        super().__init__(f"dataset has no records{_where(path)}")


class AlreadyScaled(TracklikeError):
    def __init__(self, message: str = "dataset is already scaled"):
        super().__init__(message)


class UnknownFeature(TracklikeError):
    def __init__(self, feature: str):
        self.feature = feature
        super().__init__(f"unknown feature '{feature}'")


class TooFewRecords(TracklikeError):
    def __init__(self, needed: int, got: int):
        self.needed = needed
        self.got = got
        super().__init__(f"need at least {needed} records, got {got}")


class BadFraction(TracklikeError):
    def __init__(self, fraction: float):
        self.fraction = fraction
        super().__init__(f"train fraction must lie strictly in (0, 1), got {fraction}")


# --- network / batch ---


class DimensionMismatch(TracklikeError):
    pass


class EmptyBatch(TracklikeError):
    def __init__(self, message: str = "batch has no populated predictions"):
        super().__init__(message)


class ForwardNotRun(TracklikeError):
    def __init__(self):
        super().__init__("backward requires a forward pass on this batch first")


class EmptyCounts(TracklikeError):
    def __init__(self):
        super().__init__("confusion counts cover zero examples")


# --- optimizer ---


class ShapeMismatch(TracklikeError):
    pass


class NonFiniteGradient(TracklikeError):
    def __init__(self):
        super().__init__("gradient contains NaN or infinite entries")


# --- training / model files ---


class SingleClassDataset(TracklikeError):
    def __init__(self):
        super().__init__("training requires both liked and disliked records")


class BadConfig(TracklikeError):
    pass


class SchemaMismatch(TracklikeError):
    pass


class IoError(TracklikeError):
    """Wraps OSError from model/metrics file reads and writes."""


# --- collaborative filtering ---


class UnknownUser(TracklikeError):
    def __init__(self, user):
        self.user = user
        super().__init__(f"unknown user '{user}'")


class UnknownItem(TracklikeError):
    def __init__(self, item):
        self.item = item
        super().__init__(f"unknown item '{item}'")


class OutOfRange(TracklikeError):
    pass

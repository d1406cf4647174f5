"""Exception types shared across the engine."""


class RecoinError(Exception):
    """Base class for all engine errors."""


class ParseError(RecoinError):
    """A dump record could not be parsed.

    Carries the byte offset within the offending record and, when raised
    while reading a multi-line source, the 1-based line number.
    """

    def __init__(self, reason: str, offset: int = 0, line: int | None = None):
        self.reason = reason
        self.offset = offset
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}byte {offset}: {reason}")


class ValidationError(RecoinError):
    """Input violates a documented range or shape constraint."""


class NotFoundError(RecoinError):
    """Unknown item or class identifier."""


class StateError(RecoinError):
    """Operation not allowed in the current session state."""


class TimeLimitError(RecoinError):
    """Session edit window has elapsed."""


class FingerprintMismatchError(RecoinError):
    """Two artifacts were produced against different index snapshots."""


class SnapshotError(RecoinError):
    """Index snapshot file is missing, corrupt or fails verification."""


class DegenerateDataError(RecoinError):
    """A statistic is undefined on the given data (zero variance etc.)."""

"""Exception types shared across the toolkit."""

from __future__ import annotations


class SynquadError(Exception):
    """Base class for all toolkit errors."""


class DataError(SynquadError):
    """A source file or record violates its format contract."""

    def __init__(self, message: str, *, path: str | None = None, line_no: int | None = None):
        self.path = path
        self.line_no = line_no
        location = ""
        if path is not None:
            location = f"{path}:"
        if line_no is not None:
            location = f"{location}{line_no}:"
        super().__init__(f"{location} {message}" if location else message)


class AcosError(DataError):
    """Malformed quad-annotation record."""


class ConlluError(DataError):
    """Malformed CoNLL-U content."""


class AlignmentError(DataError):
    """Annotated sentence and dependency parse do not describe the same tokens."""


class ProtocolError(SynquadError):
    """A subprocess predictor violated the JSONL request/response protocol."""

"""Exception hierarchy shared by all diacrit modules.

Every error that signals bad *data* (as opposed to bad usage) derives from
:class:`DiacritError`; the CLI maps those to exit code 1.
"""
from __future__ import annotations


class DiacritError(Exception):
    """Base class for data errors raised by diacrit."""


class AlignmentError(DiacritError):
    """A stripped/diacritized token pair cannot be aligned character by character."""


class ParseError(DiacritError):
    """Malformed serialized instruction."""

    def __init__(self, text: str, offset: int, reason: str):
        self.text = text
        self.offset = offset
        self.reason = reason
        super().__init__(f"{reason} at offset {offset} in {text!r}")


class SpanOverlapError(DiacritError):
    """Token spans of one sentence overlap."""


class M2FormatError(DiacritError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorpusError(DiacritError):
    """Parallel corpus violates its alignment or mask invariants."""


class ModelFormatError(DiacritError):
    """Model or instruction-set file is corrupt, truncated or of the wrong version."""


class LengthMismatchError(DiacritError):
    def __init__(self, message: str, sentence: int | None = None):
        self.sentence = sentence
        super().__init__(message)


class EmptyEvaluationError(DiacritError):
    """No word qualified for evaluation."""


class PairingError(DiacritError):
    """An annotation item lacks its SYSTEM or GOLD verdict."""

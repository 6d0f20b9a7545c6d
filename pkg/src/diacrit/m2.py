"""M2 error-correction annotations turned into diacritization test data.

Only edits that change diacritics or casing are applied to build the gold
side.  Words touched by any other edit stay as written in the source but are
masked out of evaluation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import MaskedParallelCorpus, ParallelEntry, split_lines
from .errors import M2FormatError
from .unicode_marks import case_fold, nfc, strip_diacritics

NOOP = -1


@dataclass(frozen=True)
class Edit:
    start: int
    end: int
    type: str
    correction: tuple[str, ...]
    required: str = "REQUIRED"
    comment: str = "-NONE-"
    annotator: int = 0

    @property
    def is_noop(self) -> bool:
        return self.start == NOOP and self.end == NOOP


@dataclass(frozen=True)
class M2Sentence:
    tokens: tuple[str, ...]
    edits: tuple[Edit, ...] = ()
    line: int = 0

    def edits_of(self, annotator: int) -> list[Edit]:
        return [e for e in self.edits if e.annotator == annotator and not e.is_noop]


@dataclass(frozen=True)
class M2Document:
    sentences: tuple[M2Sentence, ...] = field(default=())

    @property
    def annotators(self) -> set[int]:
        return {e.annotator for s in self.sentences for e in s.edits}


def _parse_edit(line: str, lineno: int, ntokens: int) -> Edit:
    fields = line[2:].split("|||")
    if len(fields) != 6:
        raise M2FormatError(f"expected 6 '|||'-separated fields, got {len(fields)}", lineno)
    span, etype, correction, required, comment, annotator = fields
    parts = span.split()
    if len(parts) != 2:
        raise M2FormatError(f"bad span {span!r}", lineno)
    try:
        start, end = int(parts[0]), int(parts[1])
        annotator_id = int(annotator)
    except ValueError:
        raise M2FormatError(f"non-numeric span or annotator in {line!r}", lineno) from None
    if not (start == end == NOOP) and not (0 <= start <= end <= ntokens):
        raise M2FormatError(f"span {start} {end} out of range for {ntokens} tokens", lineno)
    words = () if correction.strip() in ("", "-NONE-") else tuple(nfc(correction).split())
    return Edit(start, end, etype, words, required, comment, annotator_id)


def parse_m2(text: str) -> M2Document:
    """Parse ``S``/``A`` blocks separated by blank lines."""
    sentences: list[M2Sentence] = []
    tokens: tuple[str, ...] | None = None
    edits: list[Edit] = []
    start_line = 0

    def flush() -> None:
        nonlocal tokens, edits
        if tokens is not None:
            sentences.append(M2Sentence(tokens, tuple(edits), start_line))
        tokens, edits = None, []

    for lineno, line in enumerate(split_lines(text), start=1):
        if not line.strip():
            flush()
        elif line.startswith("S ") or line == "S":
            flush()
            tokens = tuple(nfc(line[2:]).split())
            start_line = lineno
        elif line.startswith("A "):
            if tokens is None:
                raise M2FormatError("edit line before any source line", lineno)
            edits.append(_parse_edit(line, lineno, len(tokens)))
        else:
            raise M2FormatError(f"unrecognized line {line[:40]!r}", lineno)
    flush()
    return M2Document(tuple(sentences))


def read_m2(path: str | Path) -> M2Document:
    return parse_m2(Path(path).read_text(encoding="utf-8"))


class EditClass(enum.Enum):
    DIACRITIC_OR_CASING = "diacritic_or_casing"
    OTHER = "other"


def classify_edit(source: tuple[str, ...] | list[str], correction: tuple[str, ...] | list[str]) -> EditClass:
    """Label-free: equal token counts and identical after case folding and stripping."""
    if len(source) != len(correction):
        return EditClass.OTHER
    for a, b in zip(source, correction):
        if strip_diacritics(case_fold(a)) != strip_diacritics(case_fold(b)):
            return EditClass.OTHER
    return EditClass.DIACRITIC_OR_CASING


def _check_overlaps(edits: list[Edit], sentence: M2Sentence) -> None:
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.start < prev.end:
            raise M2FormatError(
                f"overlapping edits [{prev.start},{prev.end}) and [{cur.start},{cur.end})", sentence.line
            )


def realize_sentence(sentence: M2Sentence, annotator: int = 0) -> ParallelEntry:
    edits = sentence.edits_of(annotator)
    _check_overlaps(edits, sentence)
    words = list(sentence.tokens)
    mask = [True] * len(words)
    for edit in edits:
        source = sentence.tokens[edit.start:edit.end]
        if classify_edit(source, edit.correction) is EditClass.DIACRITIC_OR_CASING:
            words[edit.start:edit.end] = edit.correction
        elif edit.start == edit.end:
            # Insertion: mask the neighbours on both sides of the gap.
            for k in (edit.start - 1, edit.start):
                if 0 <= k < len(mask):
                    mask[k] = False
        else:
            for k in range(edit.start, edit.end):
                mask[k] = False
    gold = " ".join(words)
    return ParallelEntry(strip_diacritics(gold), gold, tuple(mask))


def realize_targets(doc: M2Document, annotator: int = 0, provenance: str = "") -> MaskedParallelCorpus:
    """Gold = source + the annotator's diacritic/casing edits; OTHER edit spans masked."""
    return MaskedParallelCorpus(tuple(realize_sentence(s, annotator) for s in doc.sentences), provenance)

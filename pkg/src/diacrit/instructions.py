"""Diacritization instructions.

An instruction is a list of ``(index, mark)`` pairs telling which characters
of an undiacritized token receive which mark, e.g. ``1:ACUTE;3:CARON`` turns
``dite`` into ``dítě``.  ``<KEEP>`` leaves the token alone.  Instruction sets
are the label vocabularies a classifier predicts over.
"""
from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import AlignmentError, ModelFormatError, ParseError
from .unicode_marks import DiacriticalMark, case_fold, compose, decompose, nfc, strip_diacritics

logger = logging.getLogger(__name__)

KEEP_TEXT = "<KEEP>"
INSTRSET_HEADER = "#diacrit-instrset v1"


@dataclass(frozen=True, order=True)
class Instruction:
    tuples: tuple[tuple[int, DiacriticalMark], ...] = ()

    def __post_init__(self) -> None:
        last = -1
        for index, mark in self.tuples:
            if not isinstance(index, int) or index <= last:
                raise ValueError(f"indices must be strictly increasing ints: {self.tuples!r}")
            if not isinstance(mark, DiacriticalMark):
                raise TypeError(f"expected DiacriticalMark, got {mark!r}")
            last = index

    @classmethod
    def of(cls, *pairs: tuple[int, str]) -> "Instruction":
        return cls(tuple((i, DiacriticalMark(m)) for i, m in pairs))

    @property
    def is_keep(self) -> bool:
        return not self.tuples

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Instruction({serialize(self)!r})"


KEEP = Instruction()


def serialize(instr: Instruction) -> str:
    if instr.is_keep:
        return KEEP_TEXT
    return ";".join(f"{i}:{m}" for i, m in instr.tuples)


_TUPLE_RE = re.compile(r"(0|[1-9][0-9]*):([A-Z]+(?: [A-Z]+)*)")


def parse(text: str) -> Instruction:
    """Inverse of :func:`serialize`; raises :class:`ParseError` on bad input."""
    if text == KEEP_TEXT:
        return KEEP
    if not text:
        raise ParseError(text, 0, "empty instruction")
    pairs = []
    offset = 0
    last = -1
    for group in text.split(";"):
        m = _TUPLE_RE.fullmatch(group)
        if m is None:
            if not group:
                reason = "empty tuple"
            elif ":" not in group:
                reason = "missing ':' separator"
            elif group.endswith(":"):
                reason = "missing mark name"
            else:
                reason = "malformed tuple"
            raise ParseError(text, offset, reason)
        index = int(m.group(1))
        if index <= last:
            raise ParseError(text, offset, "indices not strictly increasing")
        last = index
        pairs.append((index, DiacriticalMark(m.group(2))))
        offset += len(group) + 1
    return Instruction(tuple(pairs))


def derive_instruction(stripped: str, diacritized: str) -> Instruction:
    """Instruction that turns ``stripped`` into ``diacritized``.

    Characters are compared up to case, so the result is the same for
    ``("zizkovi", "Žižkovi")`` and ``("ZIZKOVI", "žižkovi")``.
    """
    if len(stripped) != len(diacritized):
        raise AlignmentError(
            f"length mismatch: {stripped!r} ({len(stripped)}) vs {diacritized!r} ({len(diacritized)})"
        )
    pairs = []
    for i, (s, d) in enumerate(zip(stripped, diacritized)):
        base, mark = decompose(d)
        if case_fold(base) != case_fold(s):
            raise AlignmentError(f"base mismatch at {i}: {s!r} vs {d!r} in {diacritized!r}")
        if mark is not None:
            pairs.append((i, mark))
    return Instruction(tuple(pairs)) if pairs else KEEP


def apply_instruction(token: str, instr: Instruction) -> str:
    """Apply ``instr`` to ``token``; any impossible tuple makes the whole call a no-op."""
    if instr.is_keep:
        return token
    chars = list(token)
    for index, mark in instr.tuples:
        if index >= len(chars):
            return token
        marked = compose(chars[index], mark)
        if marked is None:
            return token
        chars[index] = marked
    return "".join(chars)


@dataclass(frozen=True)
class InstructionSet:
    """Bidirectional instruction <-> ID map. ``<KEEP>`` always has ID 0."""

    instructions: tuple[Instruction, ...]
    counts: tuple[int, ...]
    min_count: int = 2
    skipped: tuple[tuple[int, str], ...] = field(default=(), compare=False)
    _ids: dict[Instruction, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.instructions or self.instructions[0] != KEEP:
            raise ValueError("instruction 0 must be <KEEP>")
        if len(self.counts) != len(self.instructions):
            raise ValueError("counts and instructions differ in length")
        ids = {instr: i for i, instr in enumerate(self.instructions)}
        if len(ids) != len(self.instructions):
            raise ValueError("duplicate instruction")
        object.__setattr__(self, "_ids", ids)

    def __len__(self) -> int:
        return len(self.instructions)

    def __contains__(self, instr: object) -> bool:
        return instr in self._ids

    def __iter__(self):
        return iter(self.instructions)

    @property
    def keep_id(self) -> int:
        return 0

    def id_of(self, instr: Instruction) -> int | None:
        return self._ids.get(instr)

    def instruction_of(self, ident: int) -> Instruction:
        return self.instructions[ident]

    def count_of(self, instr: Instruction) -> int:
        i = self._ids.get(instr)
        return 0 if i is None else self.counts[i]

    @classmethod
    def from_counts(cls, counts: Counter, min_count: int = 2, skipped=()) -> "InstructionSet":
        """Filter by ``min_count`` and assign IDs: KEEP first, then by count desc, text asc."""
        if min_count < 1:
            raise ValueError("min_count must be >= 1")
        kept = [(instr, n) for instr, n in counts.items() if not instr.is_keep and n >= min_count]
        kept.sort(key=lambda kv: (-kv[1], serialize(kv[0])))
        instructions = (KEEP,) + tuple(instr for instr, _ in kept)
        numbers = (counts.get(KEEP, 0),) + tuple(n for _, n in kept)
        return cls(instructions, numbers, min_count, tuple(skipped))

    def to_tsv(self) -> str:
        lines = [f"{INSTRSET_HEADER} min_count={self.min_count}"]
        for i, (instr, n) in enumerate(zip(self.instructions, self.counts)):
            lines.append(f"{i}\t{serialize(instr)}\t{n}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "InstructionSet":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise ModelFormatError("empty instruction-set file")
        header = lines[0]
        m = re.fullmatch(r"#diacrit-instrset v(\d+) min_count=(\d+)", header)
        if m is None:
            raise ModelFormatError(f"bad instruction-set header: {header!r}")
        if m.group(1) != "1":
            raise ModelFormatError(f"unsupported instruction-set version {m.group(1)}")
        instructions, numbers = [], []
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split("\t")
            if len(parts) != 3:
                raise ModelFormatError(f"line {lineno}: expected 3 columns")
            ident, text_instr, count = parts
            try:
                if int(ident) != len(instructions):
                    raise ModelFormatError(f"line {lineno}: IDs not dense")
                instructions.append(parse(text_instr))
                numbers.append(int(count))
            except (ValueError, ParseError) as exc:
                raise ModelFormatError(f"line {lineno}: {exc}") from exc
        try:
            return cls(tuple(instructions), tuple(numbers), int(m.group(2)))
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_tsv(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "InstructionSet":
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))


Tokenizer = Callable[[str], Sequence[tuple[str, str]]]


def aligned_tokens(sentence: str, tokenizer: Callable[[str], Sequence] | None = None) -> list[tuple[str, str]]:
    """``(stripped, diacritized)`` token pairs for one diacritized sentence.

    Tokenization runs on the stripped side; its spans are reused on the
    diacritized side, which is valid because stripping preserves length.
    """
    from .tokenize import word_tokenize

    sentence = nfc(sentence)
    stripped = strip_diacritics(sentence)
    tokens = (tokenizer or word_tokenize)(stripped)
    return [(tok.surface, sentence[tok.start:tok.end]) for tok in tokens]


def count_instructions(
    sentences: Iterable[str],
    tokenizer: Callable[[str], Sequence] | None = None,
) -> tuple[Counter, list[tuple[int, str]]]:
    counts: Counter = Counter()
    skipped: list[tuple[int, str]] = []
    for n, sentence in enumerate(sentences):
        try:
            derived = [derive_instruction(s, d) for s, d in aligned_tokens(sentence, tokenizer)]
        except AlignmentError as exc:
            logger.warning("sentence %d skipped: %s", n, exc)
            skipped.append((n, str(exc)))
            continue
        counts.update(derived)
    return counts, skipped


def extract_instruction_set(
    sentences: Iterable[str],
    min_count: int = 2,
    tokenizer: Callable[[str], Sequence] | None = None,
) -> InstructionSet:
    """Count the instruction of every token and keep those seen ``min_count`` times.

    Sentences that fail to align are skipped; they are listed in
    ``InstructionSet.skipped`` as ``(sentence index, reason)``.
    """
    counts, skipped = count_instructions(sentences, tokenizer)
    return InstructionSet.from_counts(counts, min_count, skipped)

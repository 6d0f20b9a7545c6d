"""Aligned (stripped, gold) corpora with per-word evaluation masks.

Words here are whitespace-delimited, which is how the evaluation data is
tokenized.  On disk a corpus is up to three line-aligned UTF-8 files:
``<prefix>.strip.txt``, ``<prefix>.gold.txt`` and an optional
``<prefix>.mask.txt`` holding space-separated 0/1 flags.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import CorpusError
from .unicode_marks import case_fold, nfc, strip_diacritics


@dataclass(frozen=True)
class ParallelEntry:
    stripped: str
    gold: str
    mask: tuple[bool, ...]

    @property
    def stripped_words(self) -> list[str]:
        return self.stripped.split()

    @property
    def gold_words(self) -> list[str]:
        return self.gold.split()


def check_entry(entry: ParallelEntry, index: int = 0) -> None:
    src, gold = entry.stripped_words, entry.gold_words
    if not (len(src) == len(gold) == len(entry.mask)):
        raise CorpusError(
            f"sentence {index}: {len(src)} stripped words, {len(gold)} gold words, "
            f"{len(entry.mask)} mask flags"
        )
    for k, (s, g, keep) in enumerate(zip(src, gold, entry.mask)):
        if keep and strip_diacritics(case_fold(g)) != case_fold(s):
            raise CorpusError(f"sentence {index}, word {k}: gold {g!r} does not strip to {s!r}")


@dataclass(frozen=True)
class MaskedParallelCorpus:
    entries: tuple[ParallelEntry, ...]
    provenance: str = ""
    documents: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for i, entry in enumerate(self.entries):
            check_entry(entry, i)
        if self.documents is not None and len(self.documents) != len(self.entries):
            raise CorpusError("document ids do not match the number of sentences")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ParallelEntry]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> ParallelEntry:
        return self.entries[i]

    @property
    def gold(self) -> list[str]:
        return [e.gold for e in self.entries]

    @property
    def stripped(self) -> list[str]:
        return [e.stripped for e in self.entries]

    def document_of(self, i: int) -> str:
        return self.documents[i] if self.documents is not None else ""

    def __add__(self, other: "MaskedParallelCorpus") -> "MaskedParallelCorpus":
        docs = None
        if self.documents is not None or other.documents is not None:
            docs = tuple(self.document_of(i) for i in range(len(self))) + tuple(
                other.document_of(i) for i in range(len(other))
            )
        prov = "+".join(p for p in (self.provenance, other.provenance) if p)
        return MaskedParallelCorpus(self.entries + other.entries, prov, docs)


def split_lines(text: str) -> list[str]:
    """Lines of ``text`` with ``\\r\\n``/``\\r`` tolerated and no trailing empty line."""
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def build_parallel(
    text: str | Iterable[str], provenance: str = "", keep_composition: bool = False
) -> MaskedParallelCorpus:
    """One entry per non-blank line: ``(strip(line), line, all-true mask)``."""
    lines = split_lines(text) if isinstance(text, str) else list(text)
    entries = []
    for line in lines:
        if not line.strip():
            continue
        gold = line if keep_composition else nfc(line)
        entries.append(ParallelEntry(strip_diacritics(gold), gold, (True,) * len(gold.split())))
    return MaskedParallelCorpus(tuple(entries), provenance)


def from_gold_and_mask(
    gold_lines: Sequence[str], mask_lines: Sequence[str] | None = None, provenance: str = ""
) -> MaskedParallelCorpus:
    """Corpus from gold sentences (stripped side derived) and optional mask lines."""
    if mask_lines is not None and len(mask_lines) != len(gold_lines):
        raise CorpusError(f"{len(gold_lines)} gold lines but {len(mask_lines)} mask lines")
    entries = []
    for i, line in enumerate(gold_lines):
        gold = nfc(line)
        if mask_lines is None:
            mask = (True,) * len(gold.split())
        else:
            mask = parse_mask(mask_lines[i], i)
        entries.append(ParallelEntry(strip_diacritics(gold), gold, mask))
    return MaskedParallelCorpus(tuple(entries), provenance)


def parse_mask(line: str, index: int = 0) -> tuple[bool, ...]:
    flags = []
    for flag in line.split():
        if flag not in ("0", "1"):
            raise CorpusError(f"mask line {index}: expected 0/1, got {flag!r}")
        flags.append(flag == "1")
    return tuple(flags)


def format_mask(mask: Sequence[bool]) -> str:
    return " ".join("1" if m else "0" for m in mask)


def _read(path: Path) -> list[str]:
    return split_lines(path.read_text(encoding="utf-8"))


def _write(path: Path, lines: Iterable[str]) -> None:
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8", newline="\n")


def read_parallel(prefix: str | Path) -> MaskedParallelCorpus:
    prefix = str(prefix)
    strip_path, gold_path, mask_path = (Path(prefix + s) for s in (".strip.txt", ".gold.txt", ".mask.txt"))
    stripped, gold = _read(strip_path), _read(gold_path)
    if len(stripped) != len(gold):
        raise CorpusError(f"{strip_path} and {gold_path} differ in line count")
    masks = _read(mask_path) if mask_path.exists() else None
    if masks is not None and len(masks) != len(gold):
        raise CorpusError(f"{mask_path} has {len(masks)} lines, expected {len(gold)}")
    entries = []
    for i, (s, g) in enumerate(zip(stripped, gold)):
        g = nfc(g)
        mask = parse_mask(masks[i], i) if masks is not None else (True,) * len(g.split())
        entries.append(ParallelEntry(nfc(s), g, mask))
    return MaskedParallelCorpus(tuple(entries), Path(prefix).name)


def write_parallel(corpus: MaskedParallelCorpus, prefix: str | Path) -> None:
    prefix = str(prefix)
    _write(Path(prefix + ".strip.txt"), corpus.stripped)
    _write(Path(prefix + ".gold.txt"), corpus.gold)
    _write(Path(prefix + ".mask.txt"), (format_mask(e.mask) for e in corpus))


@dataclass(frozen=True)
class CorpusStats:
    sentences: int = 0
    words: int = 0
    evaluated: int = 0

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(
            self.sentences + other.sentences,
            self.words + other.words,
            self.evaluated + other.evaluated,
        )


def corpus_stats(corpus: MaskedParallelCorpus) -> CorpusStats:
    return CorpusStats(
        sentences=len(corpus),
        words=sum(len(e.mask) for e in corpus),
        evaluated=sum(sum(e.mask) for e in corpus),
    )

"""Error analysis: mispredictions, confusions, annotation items and verdicts."""
from __future__ import annotations

import csv
import io
import re
from collections import defaultdict
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import MaskedParallelCorpus
from .errors import CorpusError, PairingError
from .evaluate import aligned_words, words_match
from .instructions import apply_instruction
from .restore import FrequencyModel
from .unicode_marks import case_fold, strip_diacritics


@dataclass(frozen=True)
class Misprediction:
    document: str
    sentence: int
    word: int
    source: str
    system: str
    gold: str
    before_previous: str = ""
    previous: str = ""
    current_start: str = ""
    current_end: str = ""
    next: str = ""
    after_next: str = ""

    @property
    def current_sentence(self) -> str:
        return " ".join(p for p in (self.current_start, self.gold, self.current_end) if p)


def collect_mispredictions(
    hypotheses: Sequence[str], corpus: MaskedParallelCorpus, case_sensitive: bool = False
) -> list[Misprediction]:
    """One record per evaluated word whose hypothesis differs from gold.

    Context sentences come from the gold side of the same document and are
    empty past document boundaries.
    """
    gold = corpus.gold

    def ctx(i: int, delta: int) -> str:
        j = i + delta
        if 0 <= j < len(corpus) and corpus.document_of(j) == corpus.document_of(i):
            return gold[j]
        return ""

    out = []
    for i, k, h, g, evaluated in aligned_words(hypotheses, corpus):
        if not evaluated or words_match(h, g, case_sensitive):
            continue
        words = corpus[i].gold_words
        out.append(Misprediction(
            document=corpus.document_of(i),
            sentence=i,
            word=k,
            source=corpus[i].stripped_words[k],
            system=h,
            gold=g,
            before_previous=ctx(i, -2),
            previous=ctx(i, -1),
            current_start=" ".join(words[:k]),
            current_end=" ".join(words[k + 1:]),
            next=ctx(i, 1),
            after_next=ctx(i, 2),
        ))
    return out


@dataclass(frozen=True)
class Confusion:
    system: str
    gold: str
    count: int
    samples: tuple[str, ...]


def confusion_report(mispredictions: Iterable[Misprediction], samples: int = 3) -> list[Confusion]:
    """Group by exact (system, gold) pair; most frequent first, ties by the pair."""
    groups: dict[tuple[str, str], list[Misprediction]] = defaultdict(list)
    for m in mispredictions:
        groups[(m.system, m.gold)].append(m)
    ranked = sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    return [
        Confusion(sys_w, gold_w, len(ms), tuple(m.current_sentence for m in ms[:samples]))
        for (sys_w, gold_w), ms in ranked
    ]


# Annotation items ---------------------------------------------------------

ITEM_COLUMNS = (
    "item_id", "variant", "before_previous", "previous", "current_start", "current_word",
    "current_end", "next", "after_next", "correct_in_sentence", "correct_in_context", "has_typo",
)
SYSTEM, GOLD = "SYSTEM", "GOLD"


@dataclass(frozen=True)
class AnnotationItem:
    item_id: str
    variant: str
    before_previous: str
    previous: str
    current_start: str
    current_word: str
    current_end: str
    next: str
    after_next: str
    correct_in_sentence: bool | None = None
    correct_in_context: bool | None = None
    has_typo: bool | None = None


def _clean(text: str) -> str:
    # Fields may not contain tabs or line breaks.
    return re.sub(r"[\t\r\n]", " ", text)


def annotation_items(mispredictions: Iterable[Misprediction]) -> list[AnnotationItem]:
    """Two items per misprediction: system word first, then the gold word."""
    items = []
    for n, m in enumerate(mispredictions):
        shared = dict(
            before_previous=_clean(m.before_previous), previous=_clean(m.previous),
            current_start=_clean(m.current_start), current_end=_clean(m.current_end),
            next=_clean(m.next), after_next=_clean(m.after_next),
        )
        item_id = f"{n:06d}"
        items.append(AnnotationItem(item_id, SYSTEM, current_word=_clean(m.system), **shared))
        items.append(AnnotationItem(item_id, GOLD, current_word=_clean(m.gold), **shared))
    return items


def _fmt_bool(value: bool | None) -> str:
    return "" if value is None else ("true" if value else "false")


def _parse_bool(text: str, where: str) -> bool | None:
    value = text.strip().lower()
    if value == "":
        return None
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise CorpusError(f"{where}: expected true/false, got {text!r}")


def format_items(items: Iterable[AnnotationItem]) -> str:
    buf = io.StringIO()
    buf.write("\t".join(ITEM_COLUMNS) + "\n")
    for item in items:
        row = asdict(item)
        for key in ("correct_in_sentence", "correct_in_context", "has_typo"):
            row[key] = _fmt_bool(row[key])
        buf.write("\t".join(row[c] for c in ITEM_COLUMNS) + "\n")
    return buf.getvalue()


def export_annotation_items(mispredictions: Iterable[Misprediction], path: str | Path | None = None) -> str:
    """Annotation TSV (header + two rows per misprediction); written to ``path`` if given."""
    text = format_items(annotation_items(mispredictions))
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def parse_items(text: str) -> list[AnnotationItem]:
    reader = csv.reader(io.StringIO(text), delimiter="\t", quoting=csv.QUOTE_NONE)
    rows = list(reader)
    if not rows or tuple(rows[0]) != ITEM_COLUMNS:
        raise CorpusError("annotation file lacks the expected header")
    items = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(ITEM_COLUMNS):
            raise CorpusError(f"line {lineno}: expected {len(ITEM_COLUMNS)} columns, got {len(row)}")
        values = dict(zip(ITEM_COLUMNS, row))
        for key in ("correct_in_sentence", "correct_in_context", "has_typo"):
            values[key] = _parse_bool(values[key], f"line {lineno}")
        if values["variant"] not in (SYSTEM, GOLD):
            raise CorpusError(f"line {lineno}: unknown variant {values['variant']!r}")
        items.append(AnnotationItem(**values))
    return items


def read_items(path: str | Path) -> list[AnnotationItem]:
    return parse_items(Path(path).read_text(encoding="utf-8"))


# Verdicts ----------------------------------------------------------------

CATEGORIES = (
    ("sys_correct_gold_correct", "System correct, Gold correct"),
    ("sys_correct_gold_wrong", "System correct, Gold wrong"),
    ("sys_wrong_gold_wrong", "System wrong, Gold wrong"),
    ("sys_wrong_gold_correct", "System wrong, Gold correct"),
)


@dataclass(frozen=True)
class Verdict:
    item_id: str
    variant: str
    correct_in_sentence: bool
    correct_in_context: bool
    has_typo: bool


@dataclass(frozen=True)
class VerdictSummary:
    items: int
    typo_excluded: int
    counts: dict[str, int]
    sentence_correct_context_wrong: int

    @property
    def analyzed(self) -> int:
        return sum(self.counts.values())

    @property
    def percentages(self) -> dict[str, int]:
        total = self.analyzed
        return {k: (_pct(v, total) if total else 0) for k, v in self.counts.items()}


def _pct(part: int, total: int) -> int:
    # Exact integer half-up rounding of 100 * part / total.
    return (200 * part + total) // (2 * total)


def verdicts_from_items(items: Iterable[AnnotationItem]) -> list[Verdict]:
    out = []
    for item in items:
        flags = (item.correct_in_sentence, item.correct_in_context, item.has_typo)
        if any(f is None for f in flags):
            raise PairingError(f"item {item.item_id}/{item.variant} has no verdict")
        out.append(Verdict(item.item_id, item.variant, *flags))
    return out


def categorize_verdicts(verdicts: Iterable[Verdict]) -> VerdictSummary:
    """Four-way split of typo-free items by context correctness of both variants."""
    pairs: dict[str, dict[str, Verdict]] = defaultdict(dict)
    for v in verdicts:
        if v.variant in pairs[v.item_id]:
            raise PairingError(f"item {v.item_id} has two {v.variant} verdicts")
        pairs[v.item_id][v.variant] = v
    counts = {key: 0 for key, _ in CATEGORIES}
    typos = 0
    sentence_only = 0
    for item_id in sorted(pairs):
        pair = pairs[item_id]
        if set(pair) != {SYSTEM, GOLD}:
            missing = ({SYSTEM, GOLD} - set(pair)).pop()
            raise PairingError(f"item {item_id} lacks its {missing} verdict")
        sys_v, gold_v = pair[SYSTEM], pair[GOLD]
        if sys_v.has_typo or gold_v.has_typo:
            typos += 1
            continue
        key = (
            f"sys_{'correct' if sys_v.correct_in_context else 'wrong'}"
            f"_gold_{'correct' if gold_v.correct_in_context else 'wrong'}"
        )
        counts[key] += 1
        if not sys_v.correct_in_context and sys_v.correct_in_sentence:
            sentence_only += 1
    return VerdictSummary(len(pairs), typos, counts, sentence_only)


# Ambiguity ---------------------------------------------------------------

@dataclass(frozen=True)
class AmbiguousForm:
    form: str
    occurrences: int
    candidates: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class AmbiguityStats:
    forms: int
    ambiguous_forms: int
    tokens: int
    ambiguous_tokens: int
    ranking: tuple[AmbiguousForm, ...]

    @property
    def form_fraction(self) -> float:
        return self.ambiguous_forms / self.forms if self.forms else 0.0

    @property
    def token_fraction(self) -> float:
        return self.ambiguous_tokens / self.tokens if self.tokens else 0.0


def ambiguity_stats(model: FrequencyModel, top: int | None = None) -> AmbiguityStats:
    """Forms observed with two or more different instructions."""
    iset = model.instruction_set
    ranking = []
    tokens = ambiguous_tokens = 0
    for form, counts in model.unigram.items():
        total = sum(counts.values())
        tokens += total
        if len(counts) < 2:
            continue
        ambiguous_tokens += total
        surface = form[2:] if form.startswith("##") else form
        cands = sorted(
            ((apply_instruction(surface, iset.instruction_of(i)), n) for i, n in counts.items()),
            key=lambda kv: (-kv[1], kv[0]),
        )
        ranking.append(AmbiguousForm(form, total, tuple(cands)))
    ranking.sort(key=lambda a: (-len(a.candidates), -a.occurrences, a.form))
    if top is not None:
        ranking = ranking[:top]
    return AmbiguityStats(len(model.unigram), sum(1 for c in model.unigram.values() if len(c) >= 2),
                          tokens, ambiguous_tokens, tuple(ranking))


# Lexicon -----------------------------------------------------------------

@dataclass(frozen=True)
class Lexicon:
    """Known word forms (case-folded) with an optional variant-group id."""

    groups: dict[str, str | None]

    def __contains__(self, word: object) -> bool:
        return isinstance(word, str) and case_fold(word) in self.groups

    def group(self, word: str) -> str | None:
        return self.groups.get(case_fold(word))

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Lexicon":
        return cls({case_fold(w): None for w in words})

    @classmethod
    def from_text(cls, text: str) -> "Lexicon":
        groups: dict[str, str | None] = {}
        for line in text.splitlines():
            parts = line.split("\t") if "\t" in line else line.split()
            if not parts or not parts[0]:
                continue
            groups[case_fold(parts[0])] = parts[1] if len(parts) > 1 and parts[1] else None
        return cls(groups)

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def lexicon_filter(
    mispredictions: Iterable[Misprediction], lexicon: Lexicon
) -> tuple[list[Misprediction], list[Misprediction], list[Misprediction]]:
    """Split into (auto-correct variants, dubious, remaining).

    Both forms listed (and in the same variant group when groups are given)
    marks a plausible variant; a listed system word with an unlisted gold
    word is dubious.
    """
    auto, dubious, remaining = [], [], []
    for m in mispredictions:
        sys_in, gold_in = m.system in lexicon, m.gold in lexicon
        same_source = strip_diacritics(case_fold(m.system)) == strip_diacritics(case_fold(m.gold))
        if sys_in and gold_in and same_source:
            g1, g2 = lexicon.group(m.system), lexicon.group(m.gold)
            if g1 is None or g2 is None or g1 == g2:
                auto.append(m)
                continue
        if sys_in and not gold_in:
            dubious.append(m)
        else:
            remaining.append(m)
    return auto, dubious, remaining


__all__ = [
    "Misprediction", "collect_mispredictions", "Confusion", "confusion_report",
    "AnnotationItem", "annotation_items", "export_annotation_items", "format_items",
    "parse_items", "read_items", "Verdict", "VerdictSummary", "verdicts_from_items",
    "categorize_verdicts", "AmbiguousForm", "AmbiguityStats", "ambiguity_stats",
    "Lexicon", "lexicon_filter", "CATEGORIES",
]

"""Word and subword tokenization with character spans.

Tokens keep their ``[start, end)`` span in the sentence so restored surfaces
can be spliced back without touching whitespace or any other text.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ModelFormatError, SpanOverlapError
from .unicode_marks import case_fold

VOCAB_HEADER = "#diacrit-vocab v1"
CONTINUATION = "##"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    is_continuation: bool = False

    def with_surface(self, surface: str) -> "Token":
        return replace(self, surface=surface)

    @property
    def key(self) -> str:
        """Case-folded form, ``##``-prefixed for continuation pieces."""
        form = case_fold(self.surface)
        return CONTINUATION + form if self.is_continuation else form


def _char_class(c: str) -> str:
    if c.isspace():
        return " "
    if c.isalpha():
        return "a"
    if c.isdigit():
        return "d"
    return "o"


def word_tokenize(sentence: str) -> list[Token]:
    """Split into alphabetic runs, digit runs and single other characters.

    >>> [t.surface for t in word_tokenize("Zizka, 1423")]
    ['Zizka', ',', '1423']
    """
    tokens: list[Token] = []
    i, n = 0, len(sentence)
    while i < n:
        cls = _char_class(sentence[i])
        if cls == " ":
            i += 1
            continue
        j = i + 1
        if cls in "ad":
            while j < n and _char_class(sentence[j]) == cls:
                j += 1
        tokens.append(Token(sentence[i:j], i, j))
        i = j
    return tokens


@dataclass(frozen=True)
class SubwordVocabulary:
    """Word-initial and continuation pieces, stored case-folded.

    Single characters are always accepted as a fallback, so every word is
    segmentable.
    """

    initial: frozenset[str]
    continuation: frozenset[str]

    def __len__(self) -> int:
        return len(self.initial) + len(self.continuation)

    @property
    def max_len(self) -> int:
        return max((len(p) for p in self.initial | self.continuation), default=1)

    def entries(self) -> list[str]:
        return sorted(self.initial) + sorted(CONTINUATION + p for p in self.continuation)

    def to_text(self) -> str:
        return "\n".join([VOCAB_HEADER, *self.entries()]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SubwordVocabulary":
        lines = text.split("\n")
        if not lines or lines[0] != VOCAB_HEADER:
            raise ModelFormatError(f"bad vocabulary header: {lines[0] if lines else ''!r}")
        initial, continuation = set(), set()
        for line in lines[1:]:
            if not line:
                continue
            if line.startswith(CONTINUATION) and len(line) > len(CONTINUATION):
                continuation.add(line[len(CONTINUATION):])
            else:
                initial.add(line)
        return cls(frozenset(initial), frozenset(continuation))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "SubwordVocabulary":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def build_vocabulary(words: Iterable[str], size: int = 8000, max_len: int = 6) -> SubwordVocabulary:
    """Keep the ``size`` most frequent character n-grams (2..max_len) of ``words``.

    Prefix n-grams become word-initial entries, all other positions
    continuation entries.  Ties are broken by the entry text.
    """
    counts: Counter = Counter()
    for word in words:
        form = case_fold(word)
        for i in range(len(form)):
            for j in range(i + 2, min(len(form), i + max_len) + 1):
                counts[(i > 0, form[i:j])] += 1
    best = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))[:size]
    initial = frozenset(piece for (cont, piece), _ in best if not cont)
    continuation = frozenset(piece for (cont, piece), _ in best if cont)
    return SubwordVocabulary(initial, continuation)


def subword_tokenize(word: str, vocab: SubwordVocabulary, offset: int = 0) -> list[Token]:
    """Greedy longest-match segmentation of one word.

    Matching is case-insensitive; surfaces keep the original case and never
    include the ``##`` marker.
    """
    form = case_fold(word)
    pieces: list[Token] = []
    start = 0
    longest = vocab.max_len
    while start < len(word):
        table = vocab.continuation if start else vocab.initial
        end = min(len(word), start + longest)
        while end > start + 1 and form[start:end] not in table:
            end -= 1
        pieces.append(Token(word[start:end], offset + start, offset + end, start > 0))
        start = end
    return pieces


def tokenize_sentence(sentence: str, vocab: SubwordVocabulary | None = None) -> list[Token]:
    """Word tokens, further split into subwords when ``vocab`` is given."""
    words = word_tokenize(sentence)
    if vocab is None:
        return words
    out: list[Token] = []
    for tok in words:
        if tok.surface.isalpha():
            out.extend(subword_tokenize(tok.surface, vocab, tok.start))
        else:
            out.append(tok)
    return out


def detokenize(sentence: str, tokens: Sequence[Token]) -> str:
    """Splice token surfaces into ``sentence`` over their spans."""
    parts: list[str] = []
    pos = 0
    for tok in sorted(tokens, key=lambda t: (t.start, t.end)):
        if tok.start < pos:
            raise SpanOverlapError(f"span [{tok.start}, {tok.end}) overlaps previous token ending at {pos}")
        if tok.end > len(sentence) or tok.start > tok.end:
            raise SpanOverlapError(f"span [{tok.start}, {tok.end}) outside sentence of length {len(sentence)}")
        parts.append(sentence[pos:tok.start])
        parts.append(tok.surface)
        pos = tok.end
    parts.append(sentence[pos:])
    return "".join(parts)

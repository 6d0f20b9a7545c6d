"""Diacritical marks derived from Unicode character names.

A precomposed Latin letter such as ``ě`` is named ``LATIN SMALL LETTER E WITH
CARON``.  Everything after ``" WITH "`` is taken as one compound mark and the
remainder of the name identifies the base letter.  This covers letters that
have no canonical decomposition (``đ``, ``ħ``, ``ł``), which is why the
registry is built from names rather than from NFD.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

__all__ = [
    "DiacriticalMark",
    "MarkRegistry",
    "build_registry",
    "registry",
    "decompose",
    "compose",
    "strip_diacritics",
    "normalize_romanian",
    "case_fold",
    "nfc",
]

# Latin letter blocks (Basic Latin ... Latin Extended Additional, plus the
# later Latin Extended blocks so that every case pair is complete).
LATIN_BLOCKS = (
    (0x0000, 0x02AF),  # Basic Latin, Latin-1, Ext-A, Ext-B, IPA Extensions
    (0x1D00, 0x1DBF),  # Phonetic Extensions (+ Supplement)
    (0x1E00, 0x1EFF),  # Latin Extended Additional
    (0x2C60, 0x2C7F),  # Latin Extended-C
    (0xA720, 0xA7FF),  # Latin Extended-D
    (0xAB30, 0xAB6F),  # Latin Extended-E
)

_NAME_RE = re.compile(r"^(LATIN (?:SMALL|CAPITAL) LETTER .+?) WITH (.+)$")
_MARK_RE = re.compile(r"^[A-Z]+(?: [A-Z]+)*$")


class DiacriticalMark(str):
    """Mark name such as ``ACUTE`` or ``CIRCUMFLEX AND ACUTE``.

    A ``str`` subclass, so marks compare and hash like their names.
    """

    __slots__ = ()

    def __new__(cls, name: str) -> "DiacriticalMark":
        if not _MARK_RE.match(name):
            raise ValueError(f"invalid mark name: {name!r}")
        return super().__new__(cls, name)

    def __repr__(self) -> str:
        return f"DiacriticalMark({str(self)!r})"


@dataclass(frozen=True)
class MarkRegistry:
    decomposition: dict[str, tuple[str, DiacriticalMark]] = field(repr=False)
    composition: dict[tuple[str, str], str] = field(repr=False)

    def __len__(self) -> int:
        return len(self.decomposition)

    def __iter__(self) -> Iterator[tuple[str, str, DiacriticalMark]]:
        for char, (base, mark) in sorted(self.decomposition.items()):
            yield char, base, mark

    @property
    def marks(self) -> frozenset[DiacriticalMark]:
        return frozenset(mark for _, mark in self.decomposition.values())

    def decompose(self, char: str) -> tuple[str, DiacriticalMark | None]:
        hit = self.decomposition.get(char)
        if hit is None:
            return char, None
        return hit

    def compose(self, base: str, mark: str) -> str | None:
        return self.composition.get((base, mark))

    def to_tsv(self) -> str:
        lines = ["#char\tbase\tmark"]
        lines.extend(f"{c}\t{b}\t{m}" for c, b, m in self)
        return "\n".join(lines) + "\n"


def _parse_name(char: str) -> tuple[str, DiacriticalMark] | None:
    name = unicodedata.name(char, "")
    m = _NAME_RE.match(name)
    if m is None:
        return None
    base_name, suffix = m.groups()
    # Titlecase digraphs ("D WITH SMALL LETTER Z WITH CARON") are not base+mark.
    if " LETTER " in f" {suffix} ":
        return None
    try:
        base = unicodedata.lookup(base_name)
    except KeyError:
        return None
    if not _MARK_RE.match(suffix):
        return None
    return base, DiacriticalMark(suffix)


def build_registry() -> MarkRegistry:
    """Scan the Latin blocks and parse every ``... LETTER X WITH <MARK>`` name."""
    decomposition: dict[str, tuple[str, DiacriticalMark]] = {}
    composition: dict[tuple[str, str], str] = {}
    for lo, hi in LATIN_BLOCKS:
        for cp in range(lo, hi + 1):
            char = chr(cp)
            parsed = _parse_name(char)
            if parsed is None:
                continue
            decomposition[char] = parsed
            composition[parsed] = char
    return MarkRegistry(decomposition, composition)


@lru_cache(maxsize=1)
def registry() -> MarkRegistry:
    """Process-wide registry, built once."""
    return build_registry()


def decompose(char: str) -> tuple[str, DiacriticalMark | None]:
    return registry().decompose(char)


def compose(base: str, mark: str) -> str | None:
    """Precomposed character for ``base`` + ``mark`` or ``None`` if Unicode has none."""
    return registry().composition.get((base, mark))


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


@lru_cache(maxsize=1)
def _strip_table() -> dict[int, str]:
    return {ord(c): base for c, (base, _) in registry().decomposition.items()}


def strip_diacritics(text: str) -> str:
    """Replace every marked Latin letter by its base letter.

    Input is composed (NFC) first; on composed input the output has exactly
    as many characters as the input.

    >>> strip_diacritics("Žižka, 1423")
    'Zizka, 1423'
    """
    return nfc(text).translate(_strip_table())


_ROMANIAN = str.maketrans({
    "Ş": "Ș",  # Ş -> Ș
    "ş": "ș",  # ş -> ș
    "Ţ": "Ț",  # Ţ -> Ț
    "ţ": "ț",  # ţ -> ț
})


def normalize_romanian(text: str) -> str:
    """Replace S/T with cedilla by S/T with comma below (both cases)."""
    return text.translate(_ROMANIAN)


def _fold_char(c: str) -> str:
    low = c.lower()
    # str.lower() applies full case mapping; İ -> "i̇" there, but its
    # simple mapping is plain "i".
    return low if len(low) == 1 else low[0]


def case_fold(text: str) -> str:
    """Length-preserving lowercase using Unicode simple case mapping."""
    if text.isascii():
        return text.lower()
    return "".join(_fold_char(c) for c in text)

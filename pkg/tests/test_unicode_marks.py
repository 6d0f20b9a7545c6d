import unicodedata

import pytest
from hypothesis import given, strategies as st

from diacrit.unicode_marks import (
    DiacriticalMark, build_registry, case_fold, compose, decompose, normalize_romanian,
    registry, strip_diacritics,
)

REG = registry()
MARKED = sorted(REG.decomposition)


def name_oracle(c):
    """Independent per-character lookup: cut the name at ' WITH ' and look the rest up."""
    name = unicodedata.name(c, "")
    if not name.startswith(("LATIN SMALL LETTER ", "LATIN CAPITAL LETTER ")) or " WITH " not in name:
        return c
    head, _, tail = name.partition(" WITH ")
    if "LETTER" in tail:
        return c
    try:
        return unicodedata.lookup(head)
    except KeyError:
        return c


latin_text = st.text(
    alphabet=st.sampled_from(MARKED + list("abcdefghijklmnopqrstuvwxyzABCXYZ .,-1234\t")),
    max_size=40,
)


@pytest.mark.parametrize("char, base, mark", [
    ("ě", "e", "CARON"),
    ("ế", "e", "CIRCUMFLEX AND ACUTE"),
    ("đ", "d", "STROKE"),
    ("Ž", "Z", "CARON"),
    ("ș", "s", "COMMA BELOW"),
    ("ş", "s", "CEDILLA"),
    ("ư", "u", "HORN"),
    ("ł", "l", "STROKE"),
    ("ő", "o", "DOUBLE ACUTE"),
])
def test_decompose_known(char, base, mark):
    assert decompose(char) == (base, mark)


def test_unmarked_letters_are_their_own_base():
    assert decompose("e") == ("e", None)
    assert decompose("ß") == ("ß", None)
    assert decompose("1") == ("1", None)


def test_strip_examples():
    assert strip_diacritics("dítě") == "dite"
    assert strip_diacritics("dite") == "dite"
    assert strip_diacritics("Žižka, 1423") == "Zizka, 1423"


def test_strip_agrees_with_name_oracle_on_every_latin_char():
    for cp in range(0x0000, 0x0250):
        c = chr(cp)
        if unicodedata.normalize("NFC", c) != c:
            continue
        assert strip_diacritics(c) == name_oracle(c), hex(cp)


def test_strip_composes_combining_sequences():
    decomposed = "di\u0301te\u030c"
    assert len(decomposed) == 6
    assert strip_diacritics(decomposed) == "dite"


def test_compose_examples():
    assert compose("i", "ACUTE") == "í"
    assert compose("t", "RING ABOVE") is None
    assert compose("Z", "CARON") == "Ž"


def test_titlecase_digraphs_are_not_marked_letters():
    assert "ǅ" not in REG.decomposition
    assert strip_diacritics("ǅ") == "ǅ"


def test_nfd_cross_check():
    # Where a canonical decomposition exists, dropping its combining marks
    # must land on the registry base (possibly through a marked letter, as
    # for the compound STROKE AND ACUTE of U+01FE).
    checked = 0
    for c, (base, _) in REG.decomposition.items():
        nfd = unicodedata.normalize("NFD", c)
        letters = "".join(ch for ch in nfd if not unicodedata.combining(ch))
        if len(nfd) > 1 and len(letters) == 1:
            assert strip_diacritics(letters) == base, c
            checked += 1
    assert checked > 300


def test_registry_is_deterministic_and_sized():
    again = build_registry()
    assert again.decomposition == REG.decomposition
    assert len(REG) > 700
    assert {"ACUTE", "CARON", "RING ABOVE", "STROKE", "CIRCUMFLEX AND ACUTE"} <= REG.marks


def test_registry_invariants():
    for c, (base, mark) in REG.decomposition.items():
        assert compose(base, mark) == c
        assert strip_diacritics(c) == base
        assert " WITH " not in unicodedata.name(base)
        assert base not in REG.decomposition


def test_compose_of_marked_base_is_none():
    for base, _ in list(REG.composition)[:200]:
        for mark in ("ACUTE", "CARON"):
            marked = compose(base, mark)
            if marked is not None:
                for other in ("ACUTE", "CARON", "GRAVE"):
                    assert compose(marked, other) is None


def test_case_completeness():
    for (base, mark), c in REG.composition.items():
        if base.islower() and len(base.upper()) == 1 and base.upper() != base:
            upper = c.upper()
            if len(upper) == 1 and upper != c and upper in REG.decomposition:
                assert compose(base.upper(), mark) == upper


def test_every_mark_composes_with_something():
    used = {m for (_, m) in REG.composition}
    assert used == REG.marks


def test_tsv_dump():
    text = REG.to_tsv()
    assert text.startswith("#char\tbase\tmark\n")
    assert "ě\te\tCARON" in text.splitlines()


@pytest.mark.parametrize("name", ["", "acute", " ACUTE", "ACUTE ", "A  B", "CARON1"])
def test_mark_name_validation(name):
    with pytest.raises(ValueError):
        DiacriticalMark(name)


def test_romanian_examples():
    assert normalize_romanian("ş") == "ș"
    assert normalize_romanian("ţara") == "țara"
    assert normalize_romanian("text") == "text"
    assert normalize_romanian("ŞŢ") == "ȘȚ"


def test_case_fold_is_length_preserving():
    assert case_fold("İstanbul") == "istanbul"
    assert case_fold("ŽIŽKA") == "žižka"


@given(latin_text)
def test_strip_idempotent(s):
    assert strip_diacritics(strip_diacritics(s)) == strip_diacritics(s)


@given(latin_text)
def test_strip_preserves_length_whitespace_and_case(s):
    out = strip_diacritics(s)
    assert len(out) == len(s)
    for a, b in zip(s, out):
        assert a.isspace() == b.isspace()
        assert a.isupper() == b.isupper()


@given(st.text(alphabet=st.sampled_from("şţŞŢșțȘȚstăâîa "), max_size=30))
def test_romanian_idempotent_and_commutes_with_strip(s):
    once = normalize_romanian(s)
    assert normalize_romanian(once) == once
    assert strip_diacritics(normalize_romanian(s)) == normalize_romanian(strip_diacritics(s))

import pytest
from hypothesis import given, strategies as st

from diacrit.corpus import corpus_stats, CorpusStats
from diacrit.errors import M2FormatError
from diacrit.m2 import EditClass, classify_edit, parse_m2, realize_targets
from diacrit.unicode_marks import case_fold, strip_diacritics

D, O = EditClass.DIACRITIC_OR_CASING, EditClass.OTHER


def test_parse_single_edit():
    doc = parse_m2("S dite je male\nA 0 1|||diacritics|||dítě|||REQUIRED|||-NONE-|||0\n")
    (sent,) = doc.sentences
    assert sent.tokens == ("dite", "je", "male")
    (edit,) = sent.edits
    assert (edit.start, edit.end, edit.type, edit.correction, edit.annotator) == (0, 1, "diacritics", ("dítě",), 0)


def test_parse_without_edits_and_noop():
    doc = parse_m2("S a b\n\nS c\nA -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n")
    assert [len(s.edits) for s in doc.sentences] == [0, 1]
    assert doc.sentences[1].edits[0].is_noop
    assert doc.sentences[1].edits_of(0) == []


@pytest.mark.parametrize("text, line", [
    ("S a b\nA x y|||t|||c|||REQUIRED|||-NONE-|||0\n", 2),
    ("S a b\nA 0 1|||t|||c|||REQUIRED|||-NONE-\n", 2),
    ("S a b\nA 0 5|||t|||c|||REQUIRED|||-NONE-|||0\n", 2),
    ("S a\n\nS b\nA 1 0|||t|||c|||REQUIRED|||-NONE-|||0\n", 4),
    ("A 0 1|||t|||c|||REQUIRED|||-NONE-|||0\n", 1),
    ("S a\nX junk\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(M2FormatError) as info:
        parse_m2(text)
    assert info.value.line == line


@pytest.mark.parametrize("src, cor, cls", [
    (["novych"], ["nových"], D),
    (["lidi"], ["lidí"], D),
    (["oblečeny"], ["oblečení"], O),
    (["praha"], ["Praha"], D),
    (["a", "b"], ["a"], O),
    ([], ["se"], O),
    (["se"], [], O),
])
def test_classify_edit(src, cor, cls):
    assert classify_edit(src, cor) is cls
    assert classify_edit(cor, src) is cls


MIXED_EDITS = """\
S dite je male
A 0 1|||diacritics|||dítě|||REQUIRED|||-NONE-|||0
A 2 3|||diacritics|||malé|||REQUIRED|||-NONE-|||0

S novych lidi
A 0 1|||spelling|||nových|||REQUIRED|||-NONE-|||1
A 0 1|||spelling|||novejch|||REQUIRED|||-NONE-|||0
A 1 2|||diacritics|||lidí|||REQUIRED|||-NONE-|||0

S byli jsme oblečeny do kostymu a sli jsme ven ven
A 2 3|||grammar|||oblečení|||REQUIRED|||-NONE-|||0
A 4 5|||diacritics|||kostýmů|||REQUIRED|||-NONE-|||0
A 6 7|||diacritics|||šli|||REQUIRED|||-NONE-|||0
A 7 7|||missing|||jsme|||REQUIRED|||-NONE-|||0
A 9 10|||deletion|||-NONE-|||REQUIRED|||-NONE-|||0

S praha je hezka
A 0 1|||case|||Praha|||REQUIRED|||-NONE-|||0
A 1 3|||word order|||hezká je|||REQUIRED|||-NONE-|||0

S bez chyb
"""


def test_realize_mixed_edits_fixture():
    corpus = realize_targets(parse_m2(MIXED_EDITS), annotator=0)
    assert corpus.gold == [
        "dítě je malé",
        "novych lidí",
        "byli jsme oblečeny do kostýmů a šli jsme ven ven",
        "Praha je hezka",
        "bez chyb",
    ]
    assert [e.mask for e in corpus] == [
        (True, True, True),
        (False, True),
        (True, True, False, True, True, True, False, False, True, False),
        (True, False, False),
        (True, True),
    ]
    # hand count: 5 sentences, 3+2+10+3+2 words, masked 0+1+4+2+0
    assert corpus_stats(corpus) == CorpusStats(5, 20, 13)
    for e in corpus:
        for s, g, keep in zip(e.stripped_words, e.gold_words, e.mask):
            if keep:
                assert strip_diacritics(case_fold(g)) == case_fold(s)


def test_other_annotator():
    corpus = realize_targets(parse_m2(MIXED_EDITS), annotator=1)
    assert corpus.gold[1] == "nových lidi"
    assert corpus.gold[0] == "dite je male"


def test_insertion_at_sentence_boundary_masks_single_neighbour():
    doc = parse_m2("S a b\nA 0 0|||missing|||x|||REQUIRED|||-NONE-|||0\n\n"
                   "S a b\nA 2 2|||missing|||x|||REQUIRED|||-NONE-|||0\n")
    assert [e.mask for e in realize_targets(doc)] == [(False, True), (True, False)]


def test_overlap_is_an_error():
    doc = parse_m2("S a b c\nA 0 2|||x|||y z|||REQUIRED|||-NONE-|||0\nA 1 2|||x|||á|||REQUIRED|||-NONE-|||0\n")
    with pytest.raises(M2FormatError):
        realize_targets(doc)


word = st.text(alphabet="aáeéicčsšzž", min_size=1, max_size=5)


@given(st.lists(word, min_size=1, max_size=8), st.data())
def test_realization_preserves_token_count(tokens, data):
    n = len(tokens)
    lines = ["S " + " ".join(tokens)]
    pos = 0
    while pos < n:
        if data.draw(st.booleans()):
            end = data.draw(st.integers(pos, min(n, pos + 2)))
            cor = data.draw(st.lists(word, max_size=3))
            lines.append(f"A {pos} {end}|||x|||{' '.join(cor) or '-NONE-'}|||REQUIRED|||-NONE-|||0")
            pos = max(end, pos + 1)
        else:
            pos += 1
    (entry,) = realize_targets(parse_m2("\n".join(lines) + "\n")).entries
    assert len(entry.gold_words) == n
    for s, g, keep in zip(entry.stripped_words, entry.gold_words, entry.mask):
        if keep:
            assert strip_diacritics(case_fold(g)) == case_fold(s)

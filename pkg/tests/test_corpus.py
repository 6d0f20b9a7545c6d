import pytest
from hypothesis import given, strategies as st

from diacrit.corpus import (
    CorpusStats, MaskedParallelCorpus, ParallelEntry, build_parallel, corpus_stats, from_gold_and_mask,
    read_parallel, write_parallel,
)
from diacrit.errors import CorpusError


def test_build_parallel_examples():
    c = build_parallel("dítě")
    assert [(e.stripped, e.gold, e.mask) for e in c] == [("dite", "dítě", (True,))]
    assert len(build_parallel("\n\n")) == 0
    c = build_parallel("1423 .")
    assert c[0] == ParallelEntry("1423 .", "1423 .", (True, True))


def test_build_parallel_tolerates_crlf_and_composes():
    c = build_parallel("dítě\r\n\r\nje\r\n")
    assert c.gold == ["dítě", "je"]


def test_keep_composition_leaves_gold_untouched():
    c = build_parallel("díte", keep_composition=True)
    assert c[0].gold == "díte"
    assert c[0].stripped == "dite"


def test_corpus_stats_examples():
    assert corpus_stats(MaskedParallelCorpus((ParallelEntry("dite", "dítě", (True,)),))) == CorpusStats(1, 1, 1)
    c = MaskedParallelCorpus((
        ParallelEntry("a b", "á b", (True, False)),
        ParallelEntry("c", "č", (False,)),
    ))
    assert corpus_stats(c) == CorpusStats(2, 3, 1)


def test_validating_constructor():
    with pytest.raises(CorpusError):
        MaskedParallelCorpus((ParallelEntry("a b", "á", (True,)),))
    with pytest.raises(CorpusError):
        MaskedParallelCorpus((ParallelEntry("a", "á", (True, True)),))
    with pytest.raises(CorpusError):
        MaskedParallelCorpus((ParallelEntry("a x", "á b", (True, True)),))
    # A masked-out word may differ in its base letters.
    MaskedParallelCorpus((ParallelEntry("a x", "á b", (True, False)),))


def test_mask_length_checked_on_read():
    with pytest.raises(CorpusError):
        from_gold_and_mask(["dítě je"], ["1"])
    with pytest.raises(CorpusError):
        from_gold_and_mask(["dítě"], ["2"])
    with pytest.raises(CorpusError):
        from_gold_and_mask(["dítě", "je"], ["1"])


def test_files_roundtrip(tmp_path):
    c = from_gold_and_mask(["Dítě je malé .", "Žižka"], ["1 0 1 1", "1"], "fixture")
    write_parallel(c, tmp_path / "x")
    assert (tmp_path / "x.strip.txt").read_text(encoding="utf-8") == "Dite je male .\nZizka\n"
    assert (tmp_path / "x.mask.txt").read_text(encoding="utf-8") == "1 0 1 1\n1\n"
    back = read_parallel(tmp_path / "x")
    assert back.entries == c.entries


words = st.text(alphabet="aáeěiíoóuůzž", min_size=1, max_size=6)
sentences = st.lists(words, min_size=1, max_size=6).map(" ".join)


@given(st.lists(sentences, max_size=8), st.lists(sentences, max_size=8))
def test_stats_are_additive(a, b):
    ca, cb = build_parallel("\n".join(a)), build_parallel("\n".join(b))
    assert corpus_stats(ca + cb) == corpus_stats(ca) + corpus_stats(cb)

import pytest
from hypothesis import given, strategies as st

from diacrit.errors import ModelFormatError, SpanOverlapError
from diacrit.tokenize import (
    SubwordVocabulary, Token, build_vocabulary, detokenize, subword_tokenize, tokenize_sentence,
    word_tokenize,
)


def surfaces(tokens):
    return [t.surface for t in tokens]


def test_word_tokenize_examples():
    assert surfaces(word_tokenize("Zizka, 1423")) == ["Zizka", ",", "1423"]
    assert word_tokenize("") == []
    assert surfaces(word_tokenize("okolo trati")) == ["okolo", "trati"]
    assert surfaces(word_tokenize("a1b--c")) == ["a", "1", "b", "-", "-", "c"]


def test_word_tokenize_spans():
    toks = word_tokenize("  dítě ,x")
    assert [(t.start, t.end) for t in toks] == [(2, 6), (7, 8), (8, 9)]
    assert not any(t.is_continuation for t in toks)


def test_subword_greedy_trace():
    vocab = SubwordVocabulary(frozenset({"tra"}), frozenset({"ti"}))
    toks = subword_tokenize("trati", vocab)
    assert surfaces(toks) == ["tra", "ti"]
    assert [t.is_continuation for t in toks] == [False, True]
    assert [t.key for t in toks] == ["tra", "##ti"]


def test_subword_trivial_cases():
    empty = SubwordVocabulary(frozenset(), frozenset())
    assert surfaces(subword_tokenize("a", empty)) == ["a"]
    vocab = SubwordVocabulary(frozenset({"dite"}), frozenset())
    assert surfaces(subword_tokenize("dite", vocab)) == ["dite"]
    assert surfaces(subword_tokenize("Dite", vocab)) == ["Dite"]


def test_initial_and_continuation_tables_are_separate():
    vocab = SubwordVocabulary(frozenset({"ab"}), frozenset({"cd"}))
    assert surfaces(subword_tokenize("cdab", vocab)) == ["c", "d", "a", "b"]


def test_detokenize_examples():
    s = "okolo trati"
    assert detokenize(s, word_tokenize(s)) == s
    toks = word_tokenize("dite .")
    assert detokenize("dite .", [toks[0].with_surface("dítě"), toks[1]]) == "dítě ."
    with pytest.raises(SpanOverlapError):
        detokenize("abcdef", [Token("abc", 0, 3), Token("cd", 2, 4)])


def test_vocabulary_file_roundtrip(tmp_path):
    vocab = build_vocabulary(["trati", "tramvaj", "okolo", "trati"], size=30)
    path = tmp_path / "v.txt"
    vocab.save(path)
    text = path.read_text(encoding="utf-8")
    assert text.startswith("#diacrit-vocab v1\n")
    assert SubwordVocabulary.load(path) == vocab
    assert any(line.startswith("##") for line in text.splitlines())
    with pytest.raises(ModelFormatError):
        SubwordVocabulary.from_text("tra\n")


def test_build_vocabulary_keeps_most_frequent():
    vocab = build_vocabulary(["abab"] * 5 + ["xyz"] + ["xy"] * 2, size=3)
    # "xy" occurs 3x as a prefix; every n-gram of "abab" 5x. Ties: initial
    # entries first, then by text.
    assert vocab.initial == {"ab", "aba", "abab"}
    vocab = build_vocabulary(["abab"] * 5 + ["xyz"] + ["xy"] * 9, size=2)
    # "xy" (10x) leads, then the 5x tie is won by the initial "ab".
    assert vocab.initial == {"xy", "ab"} and not vocab.continuation


def test_tokenize_sentence_splits_only_alpha():
    vocab = SubwordVocabulary(frozenset({"ok"}), frozenset({"olo"}))
    toks = tokenize_sentence("okolo 1423,", vocab)
    assert surfaces(toks) == ["ok", "olo", "1423", ","]
    assert detokenize("okolo 1423,", toks) == "okolo 1423,"


@given(st.text(max_size=60))
def test_word_tokenize_detokenize_identity(s):
    assert detokenize(s, word_tokenize(s)) == s


@given(st.text(alphabet="abcdefghijklmnoprstuvz", min_size=1, max_size=20))
def test_subwords_concatenate_to_word(word):
    vocab = build_vocabulary(["abecedni", "prvni", "slovo", "tramvaj", "okolo"], size=40)
    toks = subword_tokenize(word, vocab, offset=3)
    assert "".join(surfaces(toks)) == word
    assert toks[0].start == 3 and toks[-1].end == 3 + len(word)
    assert not toks[0].is_continuation and all(t.is_continuation for t in toks[1:])
    assert all("#" not in t.surface for t in toks)

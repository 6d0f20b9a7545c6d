"""Instruction classifiers and sentence restoration.

A classifier maps a tokenized, undiacritized sentence to one instruction ID
per token.  Two count-based baselines are built in:

* unigram: the most frequent instruction of the token's case-folded form;
* context: the most frequent instruction of the (previous, form, next)
  triple, backing off to the unigram and then to ``<KEEP>``.

Ties go to the smaller ID, which is the globally more frequent instruction.
Any other scorer can be plugged in through :class:`ExternalClassifier`.
"""
from __future__ import annotations

import logging
import shlex
import subprocess
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Protocol, Sequence

from .errors import AlignmentError, ModelFormatError
from .instructions import InstructionSet, apply_instruction, derive_instruction
from .tokenize import CONTINUATION, SubwordVocabulary, Token, detokenize, tokenize_sentence
from .unicode_marks import nfc, strip_diacritics

logger = logging.getLogger(__name__)

MODEL_HEADER = "#diacrit-model v1"
BOS, EOS = "<s>", "</s>"

Key = tuple[str, str, str]


class InstructionClassifier(Protocol):
    def predict(self, tokens: Sequence[Token]) -> list[int]: ...


def _argmax(counts: Counter) -> int:
    # Highest count, then smallest ID.
    return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def context_keys(tokens: Sequence[Token]) -> list[Key]:
    forms = [t.key for t in tokens]
    padded = [BOS, *forms, EOS]
    return [(padded[i], padded[i + 1], padded[i + 2]) for i in range(len(forms))]


@dataclass
class FrequencyModel:
    instruction_set: InstructionSet
    unigram: dict[str, Counter] = field(default_factory=dict)
    context: dict[Key, Counter] = field(default_factory=dict)
    vocab: SubwordVocabulary | None = None

    @property
    def prior(self) -> Counter:
        total: Counter = Counter()
        for counts in self.unigram.values():
            total.update(counts)
        return total

    def add_sentence(self, sentence: str) -> None:
        sentence = nfc(sentence)
        stripped = strip_diacritics(sentence)
        tokens = tokenize_sentence(stripped, self.vocab)
        keep = self.instruction_set.keep_id
        ids = []
        for tok in tokens:
            instr = derive_instruction(tok.surface, sentence[tok.start:tok.end])
            ident = self.instruction_set.id_of(instr)
            ids.append(keep if ident is None else ident)
        for tok, key, ident in zip(tokens, context_keys(tokens), ids):
            self.unigram.setdefault(tok.key, Counter())[ident] += 1
            self.context.setdefault(key, Counter())[ident] += 1

    def merge(self, other: "FrequencyModel") -> "FrequencyModel":
        """Sum of both count tables (associative and commutative)."""
        if other.instruction_set != self.instruction_set:
            raise ValueError("cannot merge models over different instruction sets")
        merged = FrequencyModel(self.instruction_set, vocab=self.vocab)
        for src in (self, other):
            for form, counts in src.unigram.items():
                merged.unigram.setdefault(form, Counter()).update(counts)
            for key, counts in src.context.items():
                merged.context.setdefault(key, Counter()).update(counts)
        return merged

    def to_text(self) -> str:
        out = [MODEL_HEADER, "#section instructions", self.instruction_set.to_tsv().rstrip("\n")]
        if self.vocab is not None:
            out += ["#section vocab", self.vocab.to_text().rstrip("\n")]
        out.append("#section unigram")
        out += [f"{form}\t{_fmt_counts(c)}" for form, c in sorted(self.unigram.items())]
        out.append("#section context")
        out += [f"{p}\t{f}\t{n}\t{_fmt_counts(c)}" for (p, f, n), c in sorted(self.context.items())]
        out.append("#end")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FrequencyModel":
        lines = text.split("\n")
        if not lines or lines[0] != MODEL_HEADER:
            first = lines[0] if lines else ""
            if first.startswith("#diacrit-model v"):
                raise ModelFormatError(f"unsupported model version: {first!r}")
            raise ModelFormatError(f"not a diacrit model: {first[:40]!r}")
        sections: dict[str, list[str]] = {}
        current: list[str] | None = None
        ended = False
        for line in lines[1:]:
            if ended:
                if line:
                    raise ModelFormatError("data after #end")
                continue
            if line == "#end":
                ended = True
            elif line.startswith("#section "):
                current = sections.setdefault(line[len("#section "):], [])
            elif current is None:
                raise ModelFormatError("data before first section")
            else:
                current.append(line)
        if not ended:
            raise ModelFormatError("truncated model file (no #end)")
        for name in ("instructions", "unigram", "context"):
            if name not in sections:
                raise ModelFormatError(f"missing section {name!r}")
        iset = InstructionSet.from_tsv("\n".join(sections["instructions"]) + "\n")
        vocab = None
        if "vocab" in sections:
            vocab = SubwordVocabulary.from_text("\n".join(sections["vocab"]) + "\n")
        model = cls(iset, vocab=vocab)
        n = len(iset)
        for line in sections["unigram"]:
            parts = line.split("\t")
            if len(parts) != 2:
                raise ModelFormatError(f"bad unigram row {line[:40]!r}")
            model.unigram[parts[0]] = _parse_counts(parts[1], n)
        for line in sections["context"]:
            parts = line.split("\t")
            if len(parts) != 4:
                raise ModelFormatError(f"bad context row {line[:40]!r}")
            model.context[(parts[0], parts[1], parts[2])] = _parse_counts(parts[3], n)
        return model

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "FrequencyModel":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise ModelFormatError(f"{path}: not UTF-8") from exc
        return cls.from_text(text)


def _fmt_counts(counts: Counter) -> str:
    return ",".join(f"{i}:{n}" for i, n in sorted(counts.items()))


def _parse_counts(text: str, size: int) -> Counter:
    counts: Counter = Counter()
    try:
        for item in text.split(","):
            ident, n = item.split(":")
            ident_i, n_i = int(ident), int(n)
            if not (0 <= ident_i < size) or n_i < 1:
                raise ValueError(item)
            counts[ident_i] = n_i
    except ValueError as exc:
        raise ModelFormatError(f"bad count list {text[:40]!r}") from exc
    return counts


def train_frequency_model(
    sentences: Iterable[str],
    instruction_set: InstructionSet,
    vocab: SubwordVocabulary | None = None,
) -> FrequencyModel:
    """Count (form -> instruction) and (context triple -> instruction).

    Instructions missing from ``instruction_set`` are counted as ``<KEEP>``.
    Sentences that fail to align are logged and skipped.
    """
    model = FrequencyModel(instruction_set, vocab=vocab)
    for n, sentence in enumerate(sentences):
        try:
            model.add_sentence(sentence)
        except AlignmentError as exc:
            logger.warning("sentence %d skipped: %s", n, exc)
    return model


def _train_chunk(args: tuple[list[str], InstructionSet, SubwordVocabulary | None]) -> FrequencyModel:
    return train_frequency_model(*args)


def train_parallel(
    sentences: Sequence[str],
    instruction_set: InstructionSet,
    vocab: SubwordVocabulary | None = None,
    jobs: int = 1,
) -> FrequencyModel:
    """:func:`train_frequency_model` over ``jobs`` processes; same result for any ``jobs``."""
    if jobs <= 1 or len(sentences) < 2:
        return train_frequency_model(sentences, instruction_set, vocab)
    from concurrent.futures import ProcessPoolExecutor

    size = -(-len(sentences) // jobs)
    chunks = [(list(sentences[i:i + size]), instruction_set, vocab) for i in range(0, len(sentences), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_train_chunk, chunks))
    model = FrequencyModel(instruction_set, vocab=vocab)
    for part in parts:
        model = model.merge(part)
    return model


def classify(model: FrequencyModel, tokens: Sequence[Token], use_context: bool = True) -> list[int]:
    """Context triple argmax, else unigram argmax, else ``<KEEP>``."""
    keep = model.instruction_set.keep_id
    ids = []
    for tok, key in zip(tokens, context_keys(tokens)):
        counts = model.context.get(key) if use_context else None
        if counts is None:
            counts = model.unigram.get(tok.key)
        ids.append(_argmax(counts) if counts else keep)
    return ids


@dataclass
class ContextClassifier:
    model: FrequencyModel

    def predict(self, tokens: Sequence[Token]) -> list[int]:
        return classify(self.model, tokens, use_context=True)

    def scores(self, tokens: Sequence[Token]) -> list[list[float]]:
        return _score_vectors(self.model, tokens, True)


@dataclass
class UnigramClassifier:
    model: FrequencyModel

    def predict(self, tokens: Sequence[Token]) -> list[int]:
        return classify(self.model, tokens, use_context=False)

    def scores(self, tokens: Sequence[Token]) -> list[list[float]]:
        return _score_vectors(self.model, tokens, False)


@dataclass
class KeepClassifier:
    keep_id: int = 0

    def predict(self, tokens: Sequence[Token]) -> list[int]:
        return [self.keep_id] * len(tokens)


def _score_vectors(model: FrequencyModel, tokens: Sequence[Token], use_context: bool) -> list[list[float]]:
    """Relative frequencies over the whole instruction set, one vector per token."""
    size = len(model.instruction_set)
    out = []
    for tok, key in zip(tokens, context_keys(tokens)):
        counts = (model.context.get(key) if use_context else None) or model.unigram.get(tok.key)
        vec = [0.0] * size
        if counts:
            total = sum(counts.values())
            for ident, n in counts.items():
                vec[ident] = n / total
        else:
            vec[model.instruction_set.keep_id] = 1.0
        out.append(vec)
    return out


def format_request(tokens: Sequence[Token]) -> str:
    """One protocol request line: tokens separated by spaces, ``##`` on continuations."""
    return " ".join(CONTINUATION + t.surface if t.is_continuation else t.surface for t in tokens)


def parse_request(line: str) -> list[Token]:
    tokens = []
    pos = 0
    for piece in line.split():
        cont = piece.startswith(CONTINUATION) and len(piece) > len(CONTINUATION)
        surface = piece[len(CONTINUATION):] if cont else piece
        tokens.append(Token(surface, pos, pos + len(surface), cont))
        pos += len(surface) + 1
    return tokens


def serve(classifier: InstructionClassifier, stdin: IO[str], stdout: IO[str]) -> None:
    """Answer protocol requests: one tokenized sentence in, one line of IDs out."""
    for line in stdin:
        ids = classifier.predict(parse_request(line.rstrip("\n")))
        stdout.write(" ".join(map(str, ids)) + "\n")
        stdout.flush()


class ExternalClassifier:
    """Classifier backed by a subprocess speaking the line protocol of :func:`serve`."""

    def __init__(self, command: str | Sequence[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self._proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, encoding="utf-8", bufsize=1
        )

    def predict(self, tokens: Sequence[Token]) -> list[int]:
        assert self._proc.stdin is not None and self._proc.stdout is not None
        self._proc.stdin.write(format_request(tokens) + "\n")
        self._proc.stdin.flush()
        reply = self._proc.stdout.readline()
        if not reply:
            raise RuntimeError("external scorer closed its output")
        ids = [int(x) for x in reply.split()]
        if len(ids) != len(tokens):
            raise RuntimeError(f"scorer returned {len(ids)} IDs for {len(tokens)} tokens")
        return ids

    def close(self) -> None:
        if self._proc.stdin:
            self._proc.stdin.close()
        self._proc.wait(timeout=10)

    def __enter__(self) -> "ExternalClassifier":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def restore_sentence(
    classifier: InstructionClassifier,
    instruction_set: InstructionSet,
    sentence: str,
    vocab: SubwordVocabulary | None = None,
    max_tokens: int | None = None,
) -> str:
    """Tokenize, classify, apply and splice back.

    Classifier failures and unknown IDs degrade to ``<KEEP>``; tokens past
    ``max_tokens`` are left unchanged.
    """
    sentence = nfc(sentence)
    tokens = tokenize_sentence(sentence, vocab)
    scored = tokens if max_tokens is None else tokens[:max_tokens]
    try:
        ids = list(classifier.predict(scored))
    except Exception as exc:  # any scorer failure means no change
        logger.warning("classifier failed, keeping sentence: %s", exc)
        return sentence
    size = len(instruction_set)
    restored = []
    for tok, ident in zip(scored, ids):
        if not isinstance(ident, int) or not (0 <= ident < size):
            restored.append(tok)
            continue
        restored.append(tok.with_surface(apply_instruction(tok.surface, instruction_set.instruction_of(ident))))
    return detokenize(sentence, restored + tokens[len(scored):])

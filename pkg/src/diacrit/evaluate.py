"""Alpha-word accuracy, bootstrap confidence intervals and error reduction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .corpus import MaskedParallelCorpus
from .errors import EmptyEvaluationError, LengthMismatchError
from .unicode_marks import case_fold, nfc

DEFAULT_SEED = 42
DEFAULT_RESAMPLES = 1000


@dataclass(frozen=True)
class EvalResult:
    correct: int
    evaluated: int
    ci_low: float | None = None
    ci_high: float | None = None
    resamples: int = 0
    seed: int | None = None
    per_sentence: tuple[tuple[int, int], ...] = field(default=(), repr=False, compare=False)

    @property
    def accuracy(self) -> float:
        return self.correct / self.evaluated

    @property
    def halfwidth(self) -> float | None:
        if self.ci_low is None or self.ci_high is None:
            return None
        return (self.ci_high - self.ci_low) / 2

    def summary(self) -> str:
        """``99.22 ±0.046`` style: percent accuracy and CI half-width."""
        text = f"{100 * self.accuracy:.2f}"
        if self.halfwidth is not None:
            text += f" ±{100 * self.halfwidth:.3f}"
        return text

    def tsv(self) -> str:
        fields = [self.correct, self.evaluated, f"{self.accuracy:.6f}",
                  "" if self.ci_low is None else f"{self.ci_low:.6f}",
                  "" if self.ci_high is None else f"{self.ci_high:.6f}",
                  self.resamples, "" if self.seed is None else self.seed]
        return "\t".join(map(str, fields))

    TSV_HEADER = "correct\tevaluated\taccuracy\tci_low\tci_high\tresamples\tseed"


def is_alpha_word(word: str) -> bool:
    return any(c.isalpha() for c in word)


def words_match(hyp: str, gold: str, case_sensitive: bool = False) -> bool:
    if case_sensitive:
        return nfc(hyp) == nfc(gold)
    return case_fold(nfc(hyp)) == case_fold(nfc(gold))


def aligned_words(hypotheses: Sequence[str], corpus: MaskedParallelCorpus):
    """Yield ``(sentence index, word index, hyp word, gold word, evaluated)``."""
    if len(hypotheses) != len(corpus):
        raise LengthMismatchError(
            f"{len(hypotheses)} hypothesis sentences for {len(corpus)} gold sentences",
            min(len(hypotheses), len(corpus)),
        )
    for i, (hyp, entry) in enumerate(zip(hypotheses, corpus)):
        hyp_words, gold_words = hyp.split(), entry.gold_words
        if len(hyp_words) != len(gold_words):
            raise LengthMismatchError(
                f"sentence {i}: {len(hyp_words)} hypothesis words vs {len(gold_words)} gold words", i
            )
        for k, (h, g, keep) in enumerate(zip(hyp_words, gold_words, entry.mask)):
            yield i, k, h, g, keep and is_alpha_word(g)


def alpha_word_accuracy(
    hypotheses: Sequence[str], corpus: MaskedParallelCorpus, case_sensitive: bool = False
) -> EvalResult:
    """Accuracy over mask-true words containing at least one letter."""
    per_sentence = [[0, 0] for _ in range(len(corpus))]
    for i, _, h, g, evaluated in aligned_words(hypotheses, corpus):
        if evaluated:
            per_sentence[i][1] += 1
            per_sentence[i][0] += words_match(h, g, case_sensitive)
    correct = sum(c for c, _ in per_sentence)
    evaluated = sum(n for _, n in per_sentence)
    if evaluated == 0:
        raise EmptyEvaluationError("no evaluated words (all masked or non-alphabetic)")
    return EvalResult(correct, evaluated, per_sentence=tuple((c, n) for c, n in per_sentence))


def _replicates(correct: np.ndarray, evaluated: np.ndarray, seed: int, first: int, last: int) -> np.ndarray:
    n = len(correct)
    out = np.empty(last - first)
    for r in range(first, last):
        # Replicate r always draws from the same substream, whatever the chunking.
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
        idx = rng.integers(0, n, size=n)
        out[r - first] = correct[idx].sum() / evaluated[idx].sum()
    return out


def _replicates_star(args):
    return _replicates(*args)


def bootstrap_ci(
    pairs: Sequence[tuple[int, int]],
    resamples: int = DEFAULT_RESAMPLES,
    level: float = 0.95,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
) -> tuple[float, float]:
    """Percentile bootstrap over sentences of pooled ``correct / evaluated``.

    Sentences without evaluated words carry no information and are dropped
    before resampling.  The interval is identical for every ``jobs`` value.
    """
    data = np.array([p for p in pairs if p[1] > 0], dtype=np.int64).reshape(-1, 2)
    if len(data) == 0:
        raise EmptyEvaluationError("no sentence with evaluated words")
    if resamples < 1:
        raise ValueError("resamples must be positive")
    correct, evaluated = data[:, 0], data[:, 1]
    if jobs <= 1:
        stats = _replicates(correct, evaluated, seed, 0, resamples)
    else:
        from concurrent.futures import ProcessPoolExecutor

        bounds = np.linspace(0, resamples, jobs + 1).astype(int)
        tasks = [(correct, evaluated, seed, int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            stats = np.concatenate(list(pool.map(_replicates_star, tasks)))
    alpha = (1 - level) / 2
    low, high = np.percentile(stats, [100 * alpha, 100 * (1 - alpha)], method="linear")
    return float(low), float(high)


def evaluate(
    hypotheses: Sequence[str],
    corpus: MaskedParallelCorpus,
    case_sensitive: bool = False,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    level: float = 0.95,
    jobs: int = 1,
) -> EvalResult:
    """Alpha-word accuracy plus its bootstrap interval."""
    result = alpha_word_accuracy(hypotheses, corpus, case_sensitive)
    if resamples <= 0:
        return result
    low, high = bootstrap_ci(result.per_sentence, resamples, level, seed, jobs)
    return replace(result, ci_low=low, ci_high=high, resamples=resamples, seed=seed)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def error_reduction(baseline: float, new: float) -> int:
    """Relative error-rate reduction in percent, rounded half up.

    Accepts accuracies either as fractions or as percentages; values above 1
    are read as percentages.

    >>> error_reduction(99.06, 99.22)
    17
    """
    top = 100.0 if max(baseline, new) > 1 else 1.0
    if baseline >= top:
        raise ValueError("error reduction is undefined for a perfect baseline")
    return _round_half_up((new - baseline) / (top - baseline) * 100)

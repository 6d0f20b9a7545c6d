"""Diacritics restoration via per-token diacritization instructions."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AlignmentError, CorpusError, DiacritError, EmptyEvaluationError, LengthMismatchError,
    M2FormatError, ModelFormatError, PairingError, ParseError, SpanOverlapError,
)
from .unicode_marks import (  # noqa: E402
    DiacriticalMark, MarkRegistry, build_registry, compose, decompose, normalize_romanian,
    strip_diacritics,
)
from .instructions import (  # noqa: E402
    KEEP, Instruction, InstructionSet, apply_instruction, derive_instruction,
    extract_instruction_set, parse, serialize,
)
from .tokenize import (  # noqa: E402
    SubwordVocabulary, Token, build_vocabulary, detokenize, subword_tokenize, tokenize_sentence,
    word_tokenize,
)
from .corpus import MaskedParallelCorpus, build_parallel, corpus_stats  # noqa: E402
from .m2 import classify_edit, parse_m2, realize_targets  # noqa: E402
from .restore import (  # noqa: E402
    ContextClassifier, ExternalClassifier, FrequencyModel, KeepClassifier, UnigramClassifier,
    classify, restore_sentence, train_frequency_model,
)
from .evaluate import EvalResult, alpha_word_accuracy, bootstrap_ci, error_reduction, evaluate  # noqa: E402

"""``diacrit`` command line.

Exit codes: 0 success, 1 data error (reported as ``ErrorName: message`` on
stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import __version__
from .analysis import (
    CATEGORIES, Lexicon, ambiguity_stats, categorize_verdicts, collect_mispredictions,
    confusion_report, export_annotation_items, lexicon_filter, read_items, verdicts_from_items,
)
from .corpus import corpus_stats, from_gold_and_mask, split_lines, write_parallel
from .errors import DiacritError
from .evaluate import EvalResult, evaluate
from .instructions import extract_instruction_set, InstructionSet
from .m2 import read_m2, realize_targets
from .restore import (
    ContextClassifier, ExternalClassifier, FrequencyModel, KeepClassifier, UnigramClassifier,
    restore_sentence, train_parallel,
)
from .tokenize import build_vocabulary, tokenize_sentence, word_tokenize
from .unicode_marks import nfc, normalize_romanian, registry, strip_diacritics

logger = logging.getLogger("diacrit")


class UsageError(Exception):
    pass


def _default_seed() -> int:
    value = os.environ.get("DIACRIT_SEED")
    if value is None:
        return 42
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"DIACRIT_SEED must be an integer, got {value!r}") from None


def _existing(path: str | None) -> Path | None:
    if path is None or path == "-":
        return None
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _writable(path: str | None) -> Path | None:
    if path is None or path == "-":
        return None
    p = Path(path)
    if not p.parent.exists() and str(p.parent) != "":
        raise UsageError(f"output directory does not exist: {p.parent}")
    return p


def _read_text(path: str | None) -> str:
    p = _existing(path)
    if p is None:
        return sys.stdin.read()
    return p.read_text(encoding="utf-8")


class _Output:
    """stdout or a file, always UTF-8 with ``\\n`` line endings."""

    def __init__(self, path: str | None):
        self.path = _writable(path)
        self.parts: list[str] = []

    def write(self, text: str) -> None:
        self.parts.append(text)

    def close(self) -> None:
        text = "".join(self.parts)
        if self.path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            self.path.write_text(text, encoding="utf-8", newline="\n")


def _lines(text: str, keep_composition: bool = False) -> list[str]:
    lines = split_lines(text)
    return lines if keep_composition else [nfc(line) for line in lines]


def _corpus(args):
    gold = _lines(_read_text(args.gold))
    if getattr(args, "language", None) == "ro":
        gold = [normalize_romanian(g) for g in gold]
    mask = split_lines(_read_text(args.mask)) if args.mask else None
    corpus = from_gold_and_mask(gold, mask, Path(args.gold).name)
    if args.docs:
        docs = split_lines(_read_text(args.docs))
        corpus = replace(corpus, documents=tuple(docs))
    return corpus


def _hypotheses(args) -> list[str]:
    hyps = _lines(_read_text(args.hyp))
    if getattr(args, "language", None) == "ro":
        hyps = [normalize_romanian(h) for h in hyps]
    return hyps


# Subcommands ---------------------------------------------------------------

def cmd_strip(args) -> None:
    out = _Output(args.output)
    for line in _lines(_read_text(args.input), args.keep_composition):
        out.write(strip_diacritics(line) + "\n")
    out.close()


def cmd_normalize_ro(args) -> None:
    out = _Output(args.output)
    for line in _lines(_read_text(args.input), args.keep_composition):
        out.write(normalize_romanian(line) + "\n")
    out.close()


def cmd_registry(args) -> None:
    out = _Output(args.output)
    out.write(registry().to_tsv())
    out.close()


def _tokenizer_for(args, lines: Sequence[str]):
    if args.granularity == "word":
        return None
    words = [t.surface for line in lines for t in word_tokenize(strip_diacritics(line)) if t.surface.isalpha()]
    return build_vocabulary(words, size=args.vocab_size)


def cmd_extract(args) -> None:
    lines = [line for line in _lines(_read_text(args.input)) if line.strip()]
    vocab = _tokenizer_for(args, lines)
    tok = (lambda s: tokenize_sentence(s, vocab)) if vocab is not None else None
    iset = extract_instruction_set(lines, args.min_count, tok)
    out = _Output(args.output)
    out.write(iset.to_tsv())
    out.close()
    if args.tsv:
        print(f"instructions\t{len(iset)}\tmin_count\t{args.min_count}\tskipped\t{len(iset.skipped)}",
              file=sys.stderr)
    else:
        print(f"instruction set size: {len(iset)} (min_count={args.min_count}, "
              f"skipped sentences: {len(iset.skipped)})", file=sys.stderr)


def cmd_train(args) -> None:
    lines = [line for line in _lines(_read_text(args.input)) if line.strip()]
    if args.language == "ro":
        lines = [normalize_romanian(line) for line in lines]
    vocab = _tokenizer_for(args, lines)
    if args.instructions:
        iset = InstructionSet.load(_existing(args.instructions))
    else:
        tok = (lambda s: tokenize_sentence(s, vocab)) if vocab is not None else None
        iset = extract_instruction_set(lines, args.min_count, tok)
    model = train_parallel(lines, iset, vocab, jobs=args.jobs)
    out = _writable(args.output)
    model.save(out)
    print(f"trained on {len(lines)} sentences; {len(iset)} instructions, "
          f"{len(model.unigram)} forms", file=sys.stderr)


def _classifier(args, model: FrequencyModel):
    if args.scorer:
        return ExternalClassifier(args.scorer)
    if args.baseline == "keep":
        return KeepClassifier(model.instruction_set.keep_id)
    if args.baseline == "unigram":
        return UnigramClassifier(model)
    return ContextClassifier(model)


def cmd_restore(args) -> None:
    model = FrequencyModel.load(_existing(args.model))
    lines = _lines(_read_text(args.input))
    if args.language == "ro":
        lines = [normalize_romanian(line) for line in lines]
    clf = _classifier(args, model)
    out = _Output(args.output)
    try:
        for line in lines:
            out.write(restore_sentence(clf, model.instruction_set, line, model.vocab, args.max_tokens) + "\n")
    finally:
        if isinstance(clf, ExternalClassifier):
            clf.close()
    out.close()


def cmd_eval(args) -> None:
    corpus = _corpus(args)
    result = evaluate(_hypotheses(args), corpus, args.case_sensitive, args.resamples, args.seed, jobs=args.jobs)
    print(EvalResult.TSV_HEADER)
    print(result.tsv())
    stats = corpus_stats(corpus)
    print(f"alpha-word accuracy {result.summary()} ({result.correct}/{result.evaluated} words; "
          f"{stats.sentences} sentences, {stats.words} words, {stats.evaluated} unmasked)", file=sys.stderr)


def cmd_m2_realize(args) -> None:
    doc = read_m2(_existing(args.input))
    corpus = realize_targets(doc, args.annotator, Path(args.input).name)
    prefix = _writable(args.prefix)
    write_parallel(corpus, prefix)
    stats = corpus_stats(corpus)
    if args.tsv:
        print(f"{stats.sentences}\t{stats.words}\t{stats.evaluated}")
    else:
        print(f"sentences {stats.sentences}, words {stats.words}, evaluated words {stats.evaluated}")


def _mispredictions(args):
    corpus = _corpus(args)
    mis = collect_mispredictions(_hypotheses(args), corpus, args.case_sensitive)
    lex_auto = lex_dubious = None
    if args.lexicon:
        lex_auto, lex_dubious, mis = lexicon_filter(mis, Lexicon.load(_existing(args.lexicon)))
    return mis, lex_auto, lex_dubious


def cmd_report_errors(args) -> None:
    mis, auto, dubious = _mispredictions(args)
    report = confusion_report(mis)
    if args.top:
        report = report[:args.top]
    out = _Output(args.output)
    if args.tsv:
        out.write("system\tgold\tcount\tsample\n")
        for c in report:
            out.write(f"{c.system}\t{c.gold}\t{c.count}\t{c.samples[0] if c.samples else ''}\n")
    else:
        if auto is not None:
            out.write(f"lexicon: {len(auto)} auto-correct variants, {len(dubious)} dubious removed\n")
        out.write(f"{len(mis)} mispredictions, {len(report)} confusion pairs shown\n")
        for c in report:
            out.write(f"{c.count:6d}  {c.system} -> {c.gold}\n")
            for s in c.samples:
                out.write(f"        | {s}\n")
    out.close()


def cmd_export_annotations(args) -> None:
    mis, auto, dubious = _mispredictions(args)
    out = _Output(args.output)
    out.write(export_annotation_items(mis))
    out.close()
    print(f"{len(mis)} mispredictions -> {2 * len(mis)} annotation items", file=sys.stderr)


def cmd_categorize(args) -> None:
    items = read_items(_existing(args.input))
    summary = categorize_verdicts(verdicts_from_items(items))
    pct = summary.percentages
    if args.tsv:
        print("category\tcount\tpercent")
        for key, _ in CATEGORIES:
            print(f"{key}\t{summary.counts[key]}\t{pct[key]}")
        print(f"typo_excluded\t{summary.typo_excluded}\t")
        print(f"analyzed\t{summary.analyzed}\t")
        print(f"sentence_correct_context_wrong\t{summary.sentence_correct_context_wrong}\t")
    else:
        print(f"{summary.items} items, {summary.typo_excluded} with typos excluded, {summary.analyzed} analyzed")
        for key, label in CATEGORIES:
            print(f"{label}: {pct[key]}% ({summary.counts[key]} of {summary.analyzed})")
        print(f"system correct in sentence but wrong in context: {summary.sentence_correct_context_wrong}")


def cmd_ambiguity(args) -> None:
    model = FrequencyModel.load(_existing(args.model))
    stats = ambiguity_stats(model, args.top)
    if args.tsv:
        print("form\toccurrences\tcandidates")
        for a in stats.ranking:
            print(f"{a.form}\t{a.occurrences}\t" + ",".join(f"{w}:{n}" for w, n in a.candidates))
    else:
        print(f"ambiguous forms: {stats.ambiguous_forms}/{stats.forms} ({100 * stats.form_fraction:.2f}%), "
              f"ambiguous tokens: {stats.ambiguous_tokens}/{stats.tokens} ({100 * stats.token_fraction:.2f}%)")
        for a in stats.ranking:
            print(f"{a.form} ({a.occurrences}): " + ", ".join(f"{w} {n}" for w, n in a.candidates))


# Parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diacrit", description="Diacritics restoration toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        return p

    def io_args(p, output=True):
        p.add_argument("input", nargs="?", help="input file (default: stdin)")
        if output:
            p.add_argument("-o", "--output", help="output file (default: stdout)")

    def gold_args(p):
        p.add_argument("--gold", required=True)
        p.add_argument("--mask")
        p.add_argument("--hyp", required=True)
        p.add_argument("--docs", help="document id per gold line (context boundaries)")
        p.add_argument("--case-sensitive", action="store_true")

    def granularity(p):
        p.add_argument("--granularity", choices=("word", "subword"), default="word")
        p.add_argument("--vocab-size", type=int, default=8000)

    p = add("strip", cmd_strip, "remove diacritics")
    io_args(p)
    p.add_argument("--keep-composition", action="store_true", help="do not NFC-normalize input")

    p = add("normalize-ro", cmd_normalize_ro, "Romanian cedilla -> comma below")
    io_args(p)
    p.add_argument("--keep-composition", action="store_true")

    p = add("registry", cmd_registry, "dump the mark registry as TSV")
    p.add_argument("-o", "--output")

    p = add("extract-instructions", cmd_extract, "build an instruction set from diacritized text")
    io_args(p)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--tsv", action="store_true")
    granularity(p)

    p = add("train", cmd_train, "train a frequency model")
    io_args(p, output=False)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--instructions", help="instruction-set TSV (default: extract from input)")
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--language")
    granularity(p)

    p = add("restore", cmd_restore, "restore diacritics")
    io_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--baseline", choices=("context", "unigram", "keep"), default="context")
    p.add_argument("--scorer", help="external scorer command (line protocol)")
    p.add_argument("--max-tokens", type=int)
    p.add_argument("--language")

    p = add("eval", cmd_eval, "alpha-word accuracy with bootstrap CI")
    gold_args(p)
    p.add_argument("--resamples", type=int, default=1000)
    p.add_argument("--tsv", action="store_true", help="accepted for symmetry; TSV is always printed")
    p.add_argument("--language")

    p = add("m2-realize", cmd_m2_realize, "M2 file -> masked parallel corpus")
    p.add_argument("input")
    p.add_argument("prefix")
    p.add_argument("--annotator", type=int, default=0)
    p.add_argument("--tsv", action="store_true")

    p = add("report-errors", cmd_report_errors, "confusion report of mispredictions")
    gold_args(p)
    p.add_argument("--lexicon")
    p.add_argument("--top", type=int)
    p.add_argument("--tsv", action="store_true")
    p.add_argument("-o", "--output")

    p = add("export-annotations", cmd_export_annotations, "annotation items TSV")
    gold_args(p)
    p.add_argument("--lexicon")
    p.add_argument("-o", "--output")

    p = add("categorize-verdicts", cmd_categorize, "categorize annotated verdicts")
    p.add_argument("input")
    p.add_argument("--tsv", action="store_true")

    p = add("ambiguity", cmd_ambiguity, "ambiguity statistics of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--tsv", action="store_true")

    for action in sub.choices.values():
        action.add_argument("--jobs", type=int, default=1)
        action.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"diacrit: error: {exc}", file=sys.stderr)
        return 2
    except DiacritError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except UnicodeDecodeError as exc:
        print(f"UnicodeDecodeError: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

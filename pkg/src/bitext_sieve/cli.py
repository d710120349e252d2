"""Command-line entry point: ``bitext-sieve <subcommand> ...``.

Exit status: 0 success, 2 data or I/O error, 3 translator failure,
64 usage error. Results go to stdout, logs to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .corpus import SplitSpec, load_parallel, load_tsv, read_lines, split, stats, write_parallel
from .errors import (
    BpeModelError,
    DataError,
    EmptyInput,
    LineCountMismatch,
    SieveError,
    TranslationFailed,
)
from .metrics import corpus_bleu, mean_sentence_score, meteor, ribes
from .sieve import emit_report, filter_corpus
from .textnorm import DEFAULT_MARKER, BpeEncoder, BpeModel, bpe_decode, bpe_learn, tokenize
from .translators import (
    DEFAULT_TIMEOUT,
    ExternalTranslator,
    IdentityTranslator,
    LexiconTable,
    LexiconTranslator,
)

log = logging.getLogger("bitext_sieve")

EXIT_OK = 0
EXIT_DATA = 2
EXIT_TRANSLATOR = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _load(args, src: str, tgt: str):
    return load_parallel(src, tgt, args.src_lang, args.tgt_lang)


def _load_split_input(args):
    if args.tsv:
        if args.src or args.tgt:
            raise UsageError("--tsv cannot be combined with --src/--tgt")
        return load_tsv(args.tsv, args.src_lang, args.tgt_lang)
    if not (args.src and args.tgt):
        raise UsageError("need --src and --tgt, or --tsv")
    return _load(args, args.src, args.tgt)


def cmd_split(args) -> int:
    corpus = _load_split_input(args)
    try:
        spec = SplitSpec.parse(args.spec, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = split(corpus, spec)
    write_parallel(out, f"{args.out_prefix}.src", f"{args.out_prefix}.tgt")
    print(len(out))
    return EXIT_OK


def _make_translator(args, train):
    name = args.translator
    if name == "identity":
        return IdentityTranslator()
    if name == "lexicon":
        log.info("training lexicon on %d pairs", len(train))
        translator = LexiconTranslator.train(train)
        if args.save_lexicon:
            translator.table.save(args.save_lexicon)
        return translator
    if name.startswith("lexicon:"):
        table = LexiconTable.load(name[len("lexicon:"):])
        return LexiconTranslator(table, train.source_lang, train.target_lang)
    if name.startswith("extern:"):
        command = name[len("extern:"):].strip()
        if not command:
            raise UsageError("extern: needs a command")
        return ExternalTranslator(command, timeout=args.timeout)
    raise UsageError(f"unknown translator {name!r} (identity, lexicon, lexicon:PATH, extern:CMD)")


def cmd_filter(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if args.keep is not None and not 0.0 < args.keep <= 1.0:
        raise UsageError("--keep must be in (0, 1]")
    if args.divisor is not None and not args.divisor > 0:
        raise UsageError("--divisor must be positive")
    train = _load(args, args.train_src, args.train_tgt)
    validation = _load(args, args.valid_src, args.valid_tgt)
    translator = _make_translator(args, train)
    filtered, report = filter_corpus(
        train,
        validation,
        translator,
        divisor=args.divisor if args.divisor is not None else 4.0,
        keep=args.keep,
        emit_per_pair=args.per_pair,
        jobs=args.jobs,
    )
    write_parallel(filtered, f"{args.out_prefix}.src", f"{args.out_prefix}.tgt")
    report_path = args.report or f"{args.out_prefix}.report.json"
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_report(report, "json"))
    sys.stdout.write(emit_report(report, "table", language=args.label, division=args.division))
    return EXIT_OK


def cmd_eval(args) -> int:
    hyps = read_lines(args.hyp)
    refs = read_lines(args.ref)
    if len(hyps) != len(refs):
        raise LineCountMismatch(len(hyps), len(refs))
    if not hyps:
        raise EmptyInput("nothing to evaluate: input files are empty")
    hyp_toks = [tokenize(h) for h in hyps]
    ref_toks = [tokenize(r) for r in refs]
    bleu = corpus_bleu(hyp_toks, ref_toks)
    met = mean_sentence_score([meteor(h, r).score for h, r in zip(hyp_toks, ref_toks)])
    rib = mean_sentence_score([ribes(h, r).score for h, r in zip(hyp_toks, ref_toks)])
    print(f"BLEU {bleu.score:.2f} METEOR {met:.2f} RIBES {rib:.2f}")
    result = {
        "sentences": len(hyps),
        "bleu": bleu.score,
        "meteor": met,
        "ribes": rib,
        "bleu_detail": bleu.to_dict(),
    }
    print(json.dumps(result, ensure_ascii=False))
    return EXIT_OK


def cmd_bpe(args) -> int:
    if args.action == "learn":
        lines = [tokenize(line) for line in read_lines(args.input)]
        model = bpe_learn(lines, args.merges)
        model.save(args.model)
        print(len(model.merges))
        return EXIT_OK
    if args.action == "apply":
        try:
            model = BpeModel.load(args.model)
        except UnicodeDecodeError as exc:
            raise BpeModelError(f"model is not UTF-8: {exc}") from None
        encoder = BpeEncoder(model)
        transform = lambda line: encoder.encode(tokenize(line))  # noqa: E731
    else:
        transform = lambda line: bpe_decode(line.split(), DEFAULT_MARKER)  # noqa: E731
    with open(args.output, "w", encoding="utf-8", newline="\n") as out:
        for line in read_lines(args.input):
            out.write(" ".join(transform(line)) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    corpus = _load_split_input(args)
    s = stats(corpus)
    if args.json:
        print(json.dumps(s.to_dict()))
    else:
        for key, value in s.to_dict().items():
            print(f"{key}\t{value}")
    return EXIT_OK


def _add_langs(p) -> None:
    p.add_argument("--src-lang", default="src", help="source language tag (default: src)")
    p.add_argument("--tgt-lang", default="tgt", help="target language tag (default: tgt)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bitext-sieve", description="Remove mistranslated pairs from parallel corpora.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("split", help="cut a bitext down to full / quarter / first:N / fraction:F")
    p.add_argument("--src")
    p.add_argument("--tgt")
    p.add_argument("--tsv", help="two-column TSV input instead of --src/--tgt")
    p.add_argument("--spec", required=True, help="full | quarter | first:N | fraction:F")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)
    _add_langs(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("filter", help="drop pairs whose sentence BLEU falls below the cutoff")
    p.add_argument("--train-src", required=True)
    p.add_argument("--train-tgt", required=True)
    p.add_argument("--valid-src", required=True)
    p.add_argument("--valid-tgt", required=True)
    p.add_argument(
        "--translator",
        default="identity",
        help="identity | lexicon (trained on the training bitext) | lexicon:TABLE.tsv | extern:COMMAND",
    )
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--divisor", type=float, help="cutoff = validation BLEU / DIVISOR (default 4)")
    mode.add_argument("--keep", type=float, help="keep this share of the best-scoring pairs instead")
    p.add_argument("--jobs", type=int, default=_default_jobs(), help="scoring worker processes")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="extern: seconds per batch")
    p.add_argument("--report", help="JSON report path (default: OUT_PREFIX.report.json)")
    p.add_argument("--per-pair", action="store_true", help="include every pair's score in the report")
    p.add_argument("--save-lexicon", help="with --translator lexicon, also write the learned table")
    p.add_argument("--label", help="language label for the printed row (default: target tag)")
    p.add_argument("--division", default="Full", help="division label for the printed row")
    p.add_argument("--out-prefix", required=True)
    _add_langs(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("eval", help="corpus BLEU, mean METEOR and mean RIBES of a hypothesis file")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "bpe",
        help="byte-pair encoding",
        description=f"Subword segmentation. Non-final subwords end in {DEFAULT_MARKER!r}; "
        "'@' and '&' inside words are escaped as '&at;' and '&amp;'.",
    )
    bpe = p.add_subparsers(dest="action", metavar="ACTION")
    bpe.required = True
    q = bpe.add_parser("learn", help="learn merges from a text file")
    q.add_argument("--input", required=True)
    q.add_argument("--merges", type=int, default=8000)
    q.add_argument("--model", required=True)
    q = bpe.add_parser("apply", help="segment a text file")
    q.add_argument("--model", required=True)
    q.add_argument("--input", required=True)
    q.add_argument("--output", required=True)
    q = bpe.add_parser("decode", help="undo segmentation")
    q.add_argument("--input", required=True)
    q.add_argument("--output", required=True)
    p.set_defaults(func=cmd_bpe)

    p = sub.add_parser("stats", help="pair, token and empty-line counts")
    p.add_argument("--src")
    p.add_argument("--tgt")
    p.add_argument("--tsv")
    p.add_argument("--json", action="store_true")
    _add_langs(p)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TranslationFailed as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_TRANSLATOR
    except (DataError, SieveError, OSError, ValueError) as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

"""Mistranslation removal by thresholding sentence BLEU.

The procedure:

1. translate the source side of a held-out validation set and take its
   corpus BLEU ``B`` against the stored targets;
2. set the cutoff to ``B / divisor`` (divisor 4 by default);
3. translate every training source sentence, score it with sentence BLEU
   against its stored target, and drop the pair if the score is strictly
   below the cutoff.

A percentile mode keeps a fixed share of the best-scoring pairs instead.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import ParallelCorpus
from .errors import DirectionMismatch, EmptyValidation, SieveError, TranslationFailed
from .metrics import corpus_bleu, sentence_bleu
from .textnorm import tokenize
from .translators import Translator

log = logging.getLogger(__name__)

DEFAULT_DIVISOR = 4.0
BLOCK_SIZE = 10_000

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "pairs_in",
        "pairs_removed",
        "pairs_kept",
        "validation_bleu",
        "divisor",
        "cutoff",
        "mode",
        "source_lang",
        "target_lang",
    ],
    "additionalProperties": False,
    "properties": {
        "pairs_in": {"type": "integer", "minimum": 0},
        "pairs_removed": {"type": "integer", "minimum": 0},
        "pairs_kept": {"type": "integer", "minimum": 0},
        "validation_bleu": {"type": ["number", "null"], "minimum": 0, "maximum": 100},
        "divisor": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "cutoff": {"type": "number", "minimum": 0},
        "mode": {"type": "string", "pattern": r"^(ratio|percentile:[0-9.eE+-]+)$"},
        "source_lang": {"type": "string", "minLength": 1},
        "target_lang": {"type": "string", "minLength": 1},
        "per_pair": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "score", "kept"],
                "additionalProperties": False,
                "properties": {
                    "index": {"type": "integer", "minimum": 0},
                    "score": {"type": "number", "minimum": 0, "maximum": 100},
                    "kept": {"type": "boolean"},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class Threshold:
    """Where the cut falls.

    In ratio mode ``cutoff == validation_bleu / divisor``. In percentile mode
    ``keep`` is the share of pairs retained and ``cutoff`` records the lowest
    kept score.
    """

    validation_bleu: float | None
    cutoff: float
    divisor: float | None = DEFAULT_DIVISOR
    mode: str = "ratio"
    keep: float | None = None

    def __post_init__(self) -> None:
        if self.mode == "ratio":
            if self.divisor is None or not self.divisor > 0:
                raise ValueError("ratio mode needs a positive divisor")
        elif self.mode == "percentile":
            if self.keep is None or not 0.0 < self.keep <= 1.0:
                raise ValueError("percentile mode needs keep in (0, 1]")
        else:
            raise ValueError(f"unknown threshold mode {self.mode!r}")

    @classmethod
    def from_bleu(cls, validation_bleu: float, divisor: float = DEFAULT_DIVISOR) -> "Threshold":
        if not divisor > 0:
            raise ValueError("divisor must be positive")
        return cls(validation_bleu, validation_bleu / divisor, divisor)

    @property
    def mode_label(self) -> str:
        return "ratio" if self.mode == "ratio" else f"percentile:{self.keep!r}"


@dataclass(frozen=True)
class PairScore:
    index: int
    score: float
    kept: bool | None = None


@dataclass(frozen=True)
class FilterReport:
    pairs_in: int
    pairs_removed: int
    pairs_kept: int
    threshold: Threshold
    source_lang: str
    target_lang: str
    per_pair: tuple[PairScore, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if self.pairs_in != self.pairs_removed + self.pairs_kept:
            raise ValueError("pairs_in must equal pairs_removed + pairs_kept")

    def to_dict(self) -> dict:
        t = self.threshold
        d = {
            "pairs_in": self.pairs_in,
            "pairs_removed": self.pairs_removed,
            "pairs_kept": self.pairs_kept,
            "validation_bleu": t.validation_bleu,
            "divisor": t.divisor,
            "cutoff": t.cutoff,
            "mode": t.mode_label,
            "source_lang": str(self.source_lang),
            "target_lang": str(self.target_lang),
        }
        if self.per_pair is not None:
            d["per_pair"] = [{"index": p.index, "score": p.score, "kept": p.kept} for p in self.per_pair]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FilterReport":
        mode = d["mode"]
        if mode == "ratio":
            threshold = Threshold(d["validation_bleu"], d["cutoff"], d["divisor"])
        else:
            name, _, keep = mode.partition(":")
            if name != "percentile":
                raise ValueError(f"unknown mode {mode!r}")
            threshold = Threshold(d["validation_bleu"], d["cutoff"], d["divisor"], "percentile", float(keep))
        per_pair = None
        if "per_pair" in d:
            per_pair = tuple(PairScore(p["index"], p["score"], p["kept"]) for p in d["per_pair"])
        return cls(
            d["pairs_in"],
            d["pairs_removed"],
            d["pairs_kept"],
            threshold,
            d["source_lang"],
            d["target_lang"],
            per_pair,
        )


def _check_direction(translator: Translator, corpus: ParallelCorpus, what: str) -> None:
    if not translator.supports(corpus.source_lang, corpus.target_lang):
        raise DirectionMismatch(
            f"{what} runs {corpus.source_lang}->{corpus.target_lang} but translator is "
            f"{translator.source_lang}->{translator.target_lang}"
        )


def _translate_block(translator: Translator, sources: Sequence[str], start: int) -> list[str]:
    try:
        out = translator.translate_batch(sources, start)
    except TranslationFailed:
        raise
    except Exception as exc:  # backend bug or I/O trouble; keep the index
        raise TranslationFailed(f"{type(exc).__name__}: {exc}", start) from exc
    if len(out) != len(sources):
        raise TranslationFailed(f"backend returned {len(out)} lines for {len(sources)}", start)
    return out


def _score_block(translator: Translator, start: int, sources: Sequence[str], targets: Sequence[str]) -> list[float]:
    hyps = _translate_block(translator, sources, start)
    return [sentence_bleu(tokenize(h), tokenize(t)).score for h, t in zip(hyps, targets)]


_worker_translator: Translator | None = None


def _init_worker(translator: Translator) -> None:
    global _worker_translator
    _worker_translator = translator


def _score_block_in_worker(args: tuple[int, list[str], list[str]]) -> list[float]:
    assert _worker_translator is not None
    return _score_block(_worker_translator, *args)


def _blocks(corpus: ParallelCorpus, size: int):
    sources = corpus.sources
    targets = corpus.targets
    for start in range(0, len(corpus), size):
        yield start, sources[start : start + size], targets[start : start + size]


def compute_threshold(
    validation: ParallelCorpus,
    translator: Translator,
    divisor: float = DEFAULT_DIVISOR,
) -> Threshold:
    """Corpus BLEU of the translated validation set, divided by ``divisor``."""
    if len(validation) == 0:
        raise EmptyValidation("validation set is empty")
    _check_direction(translator, validation, "validation set")
    hyps = []
    for start, sources, _ in _blocks(validation, BLOCK_SIZE):
        hyps.extend(_translate_block(translator, sources, start))
    report = corpus_bleu([tokenize(h) for h in hyps], [tokenize(t) for t in validation.targets])
    log.info("validation BLEU %.3f over %d pairs", report.score, len(validation))
    return Threshold.from_bleu(report.score, divisor)


def score_pairs(
    train: ParallelCorpus,
    translator: Translator,
    jobs: int = 1,
    block_size: int | None = None,
) -> list[PairScore]:
    """Sentence BLEU of every pair's translated source against its target.

    With ``jobs > 1`` contiguous blocks are scored in worker processes and
    reassembled in index order, so the result does not depend on ``jobs``.
    """
    _check_direction(translator, train, "training set")
    n = len(train)
    if block_size is None:
        block_size = BLOCK_SIZE if jobs <= 1 else max(1, min(BLOCK_SIZE, math.ceil(n / (jobs * 4))))
    scores: list[float] = []
    if jobs <= 1 or n <= block_size:
        for start, sources, targets in _blocks(train, block_size):
            scores.extend(_score_block(translator, start, sources, targets))
    else:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(translator,)
        ) as pool:
            for block in pool.map(_score_block_in_worker, _blocks(train, block_size)):
                scores.extend(block)
    return [PairScore(i, s) for i, s in enumerate(scores)]


def select_ratio(scores: Sequence[PairScore], cutoff: float) -> list[bool]:
    # discard only on score < cutoff; a pair exactly at the cutoff stays
    return [p.score >= cutoff for p in scores]


def select_percentile(scores: Sequence[PairScore], keep: float) -> list[bool]:
    """Keep the ``ceil(keep*n)`` best pairs; ties go to the lower index."""
    n = len(scores)
    m = math.ceil(round(keep * n, 9))
    order = sorted(range(n), key=lambda i: (-scores[i].score, i))
    kept = [False] * n
    for i in order[:m]:
        kept[i] = True
    return kept


def filter_corpus(
    train: ParallelCorpus,
    validation: ParallelCorpus | None,
    translator: Translator,
    divisor: float = DEFAULT_DIVISOR,
    keep: float | None = None,
    emit_per_pair: bool = False,
    jobs: int = 1,
    threshold: Threshold | None = None,
) -> tuple[ParallelCorpus, FilterReport]:
    """Drop mistranslated pairs from ``train``.

    Ratio mode (the default) derives the cutoff from ``validation``; pass
    ``threshold`` to reuse a known cutoff instead. Setting ``keep`` switches
    to percentile mode, where ``validation`` is optional and only reported.
    """
    if validation is not None and (
        validation.source_lang != train.source_lang or validation.target_lang != train.target_lang
    ):
        raise DirectionMismatch(
            f"training set runs {train.source_lang}->{train.target_lang} but validation "
            f"set runs {validation.source_lang}->{validation.target_lang}"
        )
    if keep is not None:
        if threshold is not None:
            raise SieveError("keep and threshold are mutually exclusive")
        bleu = compute_threshold(validation, translator, divisor).validation_bleu if validation else None
    elif threshold is None:
        if validation is None:
            raise EmptyValidation("ratio mode needs a validation set or an explicit threshold")
        threshold = compute_threshold(validation, translator, divisor)

    scores = score_pairs(train, translator, jobs)
    if keep is not None:
        kept = select_percentile(scores, keep)
        floor = min((p.score for p, k in zip(scores, kept) if k), default=0.0)
        threshold = Threshold(bleu, floor, None, "percentile", keep)
    else:
        assert threshold is not None
        kept = select_ratio(scores, threshold.cutoff)

    filtered = train.subset(i for i, k in enumerate(kept) if k)
    n_kept = len(filtered)
    per_pair = None
    if emit_per_pair:
        per_pair = tuple(PairScore(p.index, p.score, k) for p, k in zip(scores, kept))
    report = FilterReport(
        len(train),
        len(train) - n_kept,
        n_kept,
        threshold,
        train.source_lang,
        train.target_lang,
        per_pair,
    )
    log.info(
        "kept %d of %d pairs (cutoff %.3f, %s)", n_kept, len(train), threshold.cutoff, threshold.mode_label
    )
    return filtered, report


def emit_report(
    report: FilterReport,
    fmt: str = "json",
    language: str | None = None,
    division: str = "Full",
) -> str:
    """Serialize a report as JSON or as a one-row text table.

    The table has the columns Language, Division, Removed and Threshold,
    with the threshold to three decimals. ``language`` defaults to the
    upper-cased target language.
    """
    if fmt == "json":
        return json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    header = ("Language", "Division", "Removed", "Threshold")
    row = (
        (language or str(report.target_lang)).upper(),
        division,
        str(report.pairs_removed),
        f"{report.threshold.cutoff:.3f}",
    )
    widths = [max(len(a), len(b)) for a, b in zip(header, row)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in (header, row)]
    return "\n".join(lines) + "\n"


def load_report(text: str) -> FilterReport:
    return FilterReport.from_dict(json.loads(text))

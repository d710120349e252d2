"""BLEU, METEOR and RIBES over token sequences.

Every metric returns a report dataclass carrying the full decomposition
(n-gram counts, penalties, alignments) next to the final score. Scores are
kept in double precision; rounding happens only when printing.

Conventions:

* BLEU is on the 0-100 scale, METEOR and RIBES on 0-1.
* Sentence BLEU adds one to numerator and denominator of any order >= 2
  with no matches, and averages only over orders the hypothesis is long
  enough to have.
* Corpus BLEU is the plain aggregate-count definition, no smoothing.
* METEOR and RIBES use exact surface matches with a nearest-position
  one-to-one alignment (see ``align_nearest``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

from ._accel import align_nearest, kendall_counts, ngram_matches
from .errors import EmptyInput, LengthMismatch

MAX_ORDER = 4
METEOR_ALPHA_WEIGHT = 9.0  # fmean = 10PR / (R + 9P)
METEOR_PENALTY_GAMMA = 0.5
METEOR_PENALTY_BETA = 3.0
RIBES_ALPHA = 0.25
RIBES_BETA = 0.10


@dataclass(frozen=True)
class NGramProfile:
    n: int
    total: int
    matched: int

    @property
    def precision(self) -> float:
        return self.matched / self.total if self.total else 0.0


@dataclass(frozen=True)
class BleuReport:
    profiles: tuple[NGramProfile, ...]
    hyp_len: int
    ref_len: int
    brevity_penalty: float
    score: float
    smoothed: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MeteorReport:
    matches: int
    chunks: int
    precision: float
    recall: float
    fmean: float
    penalty: float
    score: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RibesReport:
    aligned_ref_positions: tuple[int, ...]
    nkt: float
    unigram_precision: float
    brevity_penalty: float
    score: float

    def to_dict(self) -> dict:
        return asdict(self)


def brevity_penalty(hyp_len: int, ref_len: int) -> float:
    """``exp(1 - r/c)`` for a hypothesis shorter than its reference, else 1.

    An empty hypothesis against a non-empty reference gets 0, the limit of
    the formula.
    """
    if hyp_len >= ref_len:
        return 1.0
    if hyp_len == 0:
        return 0.0
    return math.exp(1.0 - ref_len / hyp_len)


def ngram_profile(hyp: Sequence[str], ref: Sequence[str], n: int) -> NGramProfile:
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"n-gram order must be in 1..{MAX_ORDER}, got {n}")
    matched, totals = ngram_matches(hyp, ref, n)
    return NGramProfile(n, totals[n - 1], matched[n - 1])


def _profiles(hyp: Sequence[str], ref: Sequence[str]) -> tuple[NGramProfile, ...]:
    matched, totals = ngram_matches(hyp, ref, MAX_ORDER)
    return tuple(NGramProfile(n, totals[n - 1], matched[n - 1]) for n in range(1, MAX_ORDER + 1))


def sentence_bleu(hyp: Sequence[str], ref: Sequence[str]) -> BleuReport:
    """Smoothed single-sentence BLEU, used to score individual pairs."""
    profiles = _profiles(hyp, ref)
    bp = brevity_penalty(len(hyp), len(ref))
    if not hyp or profiles[0].matched == 0:
        return BleuReport(profiles, len(hyp), len(ref), bp, 0.0, False)
    smoothed = False
    log_sum = 0.0
    orders = 0
    for prof in profiles:
        if prof.total == 0:
            continue
        if prof.matched == 0:
            smoothed = True
            log_sum += math.log(1.0 / (prof.total + 1))
        else:
            log_sum += math.log(prof.matched / prof.total)
        orders += 1
    score = 100.0 * bp * math.exp(log_sum / orders)
    return BleuReport(profiles, len(hyp), len(ref), bp, score, smoothed)


def bleu_from_counts(
    matched: Sequence[int], totals: Sequence[int], hyp_len: int, ref_len: int
) -> float:
    """Unsmoothed BLEU from aggregate counts; 0 if any order has no match."""
    if hyp_len == 0 or any(m == 0 for m in matched):
        return 0.0
    log_sum = math.fsum(math.log(m / t) for m, t in zip(matched, totals))
    return 100.0 * brevity_penalty(hyp_len, ref_len) * math.exp(log_sum / len(matched))


def corpus_bleu(hyps: Sequence[Sequence[str]], refs: Sequence[Sequence[str]]) -> BleuReport:
    """Aggregate BLEU: n-gram counts and lengths summed over all sentences."""
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses but {len(refs)} references")
    if not hyps:
        raise EmptyInput("corpus_bleu needs at least one sentence")
    matched = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        m, t = ngram_matches(hyp, ref, MAX_ORDER)
        for i in range(MAX_ORDER):
            matched[i] += m[i]
            totals[i] += t[i]
        hyp_len += len(hyp)
        ref_len += len(ref)
    profiles = tuple(
        NGramProfile(n, totals[n - 1], matched[n - 1]) for n in range(1, MAX_ORDER + 1)
    )
    return BleuReport(
        profiles,
        hyp_len,
        ref_len,
        brevity_penalty(hyp_len, ref_len),
        bleu_from_counts(matched, totals, hyp_len, ref_len),
        False,
    )


def count_chunks(alignment: Sequence[int]) -> int:
    """Runs of matches adjacent and in the same order on both sides."""
    chunks = 0
    prev_i = prev_j = -2
    for i, j in enumerate(alignment):
        if j < 0:
            continue
        if not (i == prev_i + 1 and j == prev_j + 1):
            chunks += 1
        prev_i, prev_j = i, j
    return chunks


def meteor(hyp: Sequence[str], ref: Sequence[str]) -> MeteorReport:
    alignment = align_nearest(hyp, ref)
    matches = sum(1 for j in alignment if j >= 0)
    if matches == 0:
        return MeteorReport(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
    chunks = count_chunks(alignment)
    precision = matches / len(hyp)
    recall = matches / len(ref)
    fmean = 10.0 * precision * recall / (recall + METEOR_ALPHA_WEIGHT * precision)
    penalty = METEOR_PENALTY_GAMMA * (chunks / matches) ** METEOR_PENALTY_BETA
    return MeteorReport(
        matches, chunks, precision, recall, fmean, penalty, fmean * (1.0 - penalty)
    )


def ribes(hyp: Sequence[str], ref: Sequence[str]) -> RibesReport:
    positions = tuple(j for j in align_nearest(hyp, ref) if j >= 0)
    bp = brevity_penalty(len(hyp), len(ref))
    if not hyp:
        return RibesReport(positions, 0.0, 0.0, bp, 0.0)
    k = len(positions)
    if k < 2:
        nkt = 0.0
    else:
        conc, _ = kendall_counts(positions)
        # (tau + 1) / 2 reduces to concordant / all pairs
        nkt = conc / (k * (k - 1) // 2)
    precision = k / len(hyp)
    score = nkt * precision**RIBES_ALPHA * bp**RIBES_BETA
    return RibesReport(positions, nkt, precision, bp, score)


def mean_sentence_score(scores: Sequence[float]) -> float:
    if not scores:
        raise EmptyInput("cannot average an empty score list")
    return math.fsum(scores) / len(scores)

"""Pure-Python versions of the metric inner loops.

These are the reference implementations; ``_kernels.pyx`` must agree with
them exactly on every input.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence


def ngram_matches(
    hyp: Sequence[str], ref: Sequence[str], max_n: int = 4
) -> tuple[list[int], list[int]]:
    """Clipped n-gram matches and hypothesis n-gram totals for orders 1..max_n."""
    matched = []
    totals = []
    for n in range(1, max_n + 1):
        total = max(0, len(hyp) - n + 1)
        if total == 0:
            matched.append(0)
            totals.append(0)
            continue
        h = Counter(tuple(hyp[i : i + n]) for i in range(total))
        r = Counter(tuple(ref[i : i + n]) for i in range(max(0, len(ref) - n + 1)))
        matched.append(sum(min(c, r[g]) for g, c in h.items() if g in r))
        totals.append(total)
    return matched, totals


def align_nearest(hyp: Sequence[str], ref: Sequence[str]) -> list[int]:
    """One-to-one exact-match alignment, scanning the hypothesis left to right.

    Each hypothesis token takes the unused reference position holding the
    same token that is closest to its own position, the leftmost on ties.
    Returns, per hypothesis position, the reference position or -1.
    """
    positions: dict[str, list[int]] = {}
    for j, tok in enumerate(ref):
        positions.setdefault(tok, []).append(j)
    used = [False] * len(ref)
    out = []
    for i, tok in enumerate(hyp):
        best = -1
        best_dist = 0
        for j in positions.get(tok, ()):
            if used[j]:
                continue
            d = abs(j - i)
            if best < 0 or d < best_dist:
                best, best_dist = j, d
        if best >= 0:
            used[best] = True
        out.append(best)
    return out


def kendall_counts(seq: Sequence[int]) -> tuple[int, int]:
    """Concordant and discordant pair counts of a sequence of distinct values."""
    conc = disc = 0
    k = len(seq)
    for a in range(k):
        x = seq[a]
        for b in range(a + 1, k):
            if seq[b] > x:
                conc += 1
            else:
                disc += 1
    return conc, disc

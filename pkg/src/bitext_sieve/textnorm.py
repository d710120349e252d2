"""Normalization, tokenization and byte-pair-encoding subwords.

The tokenizer is deliberately script-agnostic: NFC composition, whitespace
collapsing, and every Unicode punctuation character (categories ``P*``)
split off as its own token. Letters, marks and digits of any script stay
together.
"""

from __future__ import annotations

import heapq
import os
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import regex

from .errors import BpeModelError, MalformedMarker

TokenSequence = list[str]

DEFAULT_MARKER = "@@"
MODEL_HEADER = "#bpe-model marker="

_TOKEN_RE = regex.compile(r"\p{P}|[^\s\p{P}]+")
# Marker characters are escaped inside words so a subword can never end in
# the marker by accident; "&" is the escape character.
_UNESCAPE_RE = regex.compile(r"&(amp|at);")


def normalize(text: str) -> str:
    """Canonical composition plus whitespace collapsing; no case folding."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def tokenize(text: str) -> TokenSequence:
    """Normalize, split on whitespace, then split off punctuation characters.

    >>> tokenize("Hello, world!")
    ['Hello', ',', 'world', '!']
    """
    return _TOKEN_RE.findall(normalize(text))


def detokenize(tokens: Iterable[str]) -> str:
    return " ".join(tokens)


def _escape(word: str) -> str:
    if "&" not in word and "@" not in word:
        return word
    return word.replace("&", "&amp;").replace("@", "&at;")


def _unescape(word: str) -> str:
    if "&" not in word:
        return word
    return _UNESCAPE_RE.sub(lambda m: "&" if m.group(1) == "amp" else "@", word)


@dataclass(frozen=True)
class BpeModel:
    merges: tuple[tuple[str, str], ...] = ()
    marker: str = DEFAULT_MARKER

    def __post_init__(self) -> None:
        object.__setattr__(self, "merges", tuple(tuple(m) for m in self.merges))
        if len(set(self.merges)) != len(self.merges):
            raise BpeModelError("duplicate merge pair in model")
        if not self.marker or any(ch.isspace() for ch in self.marker):
            raise BpeModelError("marker must be a non-empty string without whitespace")
        # The escaping scheme only guarantees round trips for the default marker.
        if self.marker != DEFAULT_MARKER:
            raise BpeModelError(f"unsupported marker {self.marker!r}; use {DEFAULT_MARKER!r}")

    def ranks(self) -> dict[tuple[str, str], int]:
        return {pair: i for i, pair in enumerate(self.merges)}

    def dumps(self) -> str:
        lines = [MODEL_HEADER + self.marker]
        lines.extend(f"{a} {b}" for a, b in self.merges)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BpeModel":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or not lines[0].startswith(MODEL_HEADER):
            raise BpeModelError(f"missing header {MODEL_HEADER!r}", line=1)
        marker = lines[0][len(MODEL_HEADER):]
        merges = []
        seen = set()
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.rstrip("\r").split(" ")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise BpeModelError(f"expected two symbols separated by one space: {line!r}", line=lineno)
            pair = (parts[0], parts[1])
            if pair in seen:
                raise BpeModelError(f"duplicate merge {line!r}", line=lineno)
            seen.add(pair)
            merges.append(pair)
        return cls(tuple(merges), marker)

    def save(self, path: str | os.PathLike[str]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path: str | os.PathLike[str]) -> "BpeModel":
        with open(path, encoding="utf-8", newline="") as fh:
            return cls.loads(fh.read())


def bpe_learn(lines: Iterable[Sequence[str]], num_merges: int) -> BpeModel:
    """Learn up to ``num_merges`` merge rules from tokenized lines.

    Words start as character sequences. Each round merges the most frequent
    adjacent symbol pair, ties going to the lexicographically smallest pair.
    Learning stops early once no pair occurs at least twice.
    """
    if num_merges < 0:
        raise ValueError("num_merges must be >= 0")
    word_freq: Counter[str] = Counter()
    for tokens in lines:
        word_freq.update(_escape(t) for t in tokens)

    words = [list(w) for w in word_freq]
    freqs = list(word_freq.values())
    pair_counts: defaultdict[tuple[str, str], int] = defaultdict(int)
    where: defaultdict[tuple[str, str], set[int]] = defaultdict(set)
    for wi, symbols in enumerate(words):
        for pair in zip(symbols, symbols[1:]):
            pair_counts[pair] += freqs[wi]
            where[pair].add(wi)

    heap = [(-c, p) for p, c in pair_counts.items()]
    heapq.heapify(heap)
    merges: list[tuple[str, str]] = []
    while len(merges) < num_merges and heap:
        neg, pair = heapq.heappop(heap)
        count = pair_counts.get(pair, 0)
        if count != -neg:
            # stale entry; the live count was pushed separately
            continue
        if count < 2:
            break
        merges.append(pair)
        a, b = pair
        merged = a + b
        touched: dict[tuple[str, str], int] = {}
        for wi in sorted(where.pop(pair, ())):
            symbols = words[wi]
            freq = freqs[wi]
            for old in zip(symbols, symbols[1:]):
                pair_counts[old] -= freq
                touched[old] = pair_counts[old]
            out: list[str] = []
            i = 0
            while i < len(symbols):
                if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
                    out.append(merged)
                    i += 2
                else:
                    out.append(symbols[i])
                    i += 1
            words[wi] = out
            for new in zip(out, out[1:]):
                pair_counts[new] += freq
                touched[new] = pair_counts[new]
                where[new].add(wi)
        for p, c in touched.items():
            if c <= 0:
                pair_counts.pop(p, None)
                where.pop(p, None)
            else:
                heapq.heappush(heap, (-c, p))
        pair_counts.pop(pair, None)
    return BpeModel(tuple(merges))


def _segment(word: str, ranks: dict[tuple[str, str], int]) -> list[str]:
    """Apply merges to one escaped word, strictly in model order."""
    symbols = list(word)
    floor = 0
    while len(symbols) > 1:
        best = None
        best_pair = None
        for pair in zip(symbols, symbols[1:]):
            r = ranks.get(pair)
            if r is not None and r >= floor and (best is None or r < best):
                best, best_pair = r, pair
        if best_pair is None:
            break
        a, b = best_pair
        out = []
        i = 0
        while i < len(symbols):
            if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
                out.append(a + b)
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
        # a merge never reappears once its turn has passed
        floor = best + 1
    return symbols


class BpeEncoder:
    """Applies a :class:`BpeModel` with a per-word cache."""

    def __init__(self, model: BpeModel):
        self.model = model
        self._ranks = model.ranks()
        self._cache: dict[str, tuple[str, ...]] = {}

    def encode_word(self, word: str) -> tuple[str, ...]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        if not word:
            raise ValueError("cannot segment an empty token")
        pieces = _segment(_escape(word), self._ranks)
        marker = self.model.marker
        out = tuple(p + marker for p in pieces[:-1]) + (pieces[-1],)
        self._cache[word] = out
        return out

    def encode(self, tokens: Sequence[str]) -> TokenSequence:
        out: TokenSequence = []
        for token in tokens:
            out.extend(self.encode_word(token))
        return out


def bpe_apply(model: BpeModel, tokens: Sequence[str]) -> TokenSequence:
    """Segment every token into subwords; all but the last piece of a word
    carry the continuation marker."""
    return BpeEncoder(model).encode(tokens)


def bpe_decode(tokens: Sequence[str], marker: str = DEFAULT_MARKER) -> TokenSequence:
    """Glue marked subwords back into whole words."""
    words: TokenSequence = []
    pending: list[str] = []
    for token in tokens:
        if token.endswith(marker):
            pending.append(token[: -len(marker)])
            continue
        pending.append(token)
        words.append(_unescape("".join(pending)))
        pending = []
    if pending:
        raise MalformedMarker("token sequence ends on a continuation-marked subword")
    return words

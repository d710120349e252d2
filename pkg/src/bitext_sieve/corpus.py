"""Aligned parallel corpora: loading, splitting, persistence and statistics.

The canonical on-disk format is two UTF-8 files with one sentence per line,
where line *i* of the source file is aligned with line *i* of the target
file. A single two-column TSV file is accepted as an alternative.
"""

from __future__ import annotations

import io
import math
import os
import random
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from .errors import (
    CorpusFormatError,
    FirstKTooLarge,
    InvalidEncoding,
    LineCountMismatch,
    SizeOutOfRange,
)

LineSource = Union[str, "os.PathLike[str]", IO[bytes], IO[str], Iterable[bytes], Iterable[str]]


class LanguageTag(str):
    """Short language identifier such as ``"eng"`` or ``"ori"``."""

    def __new__(cls, code: str) -> "LanguageTag":
        if isinstance(code, LanguageTag):
            return code
        if not isinstance(code, str) or not code:
            raise ValueError("language tag must be a non-empty string")
        if code != code.lower() or any(ch.isspace() for ch in code):
            raise ValueError(f"language tag must be lowercase without whitespace: {code!r}")
        return super().__new__(cls, code)


def _check_line(text: str, what: str) -> None:
    if "\n" in text or "\r" in text:
        raise CorpusFormatError(f"{what} contains a line terminator: {text!r}")


@dataclass(frozen=True, slots=True)
class SentencePair:
    index: int
    source: str
    target: str

    def __post_init__(self) -> None:
        _check_line(self.source, f"source of pair {self.index}")
        _check_line(self.target, f"target of pair {self.index}")


@dataclass(frozen=True)
class ParallelCorpus:
    """Immutable, ordered collection of aligned sentence pairs."""

    pairs: tuple[SentencePair, ...]
    source_lang: LanguageTag
    target_lang: LanguageTag

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "source_lang", LanguageTag(self.source_lang))
        object.__setattr__(self, "target_lang", LanguageTag(self.target_lang))
        if self.source_lang == self.target_lang:
            raise ValueError(
                f"source and target language must differ (both {self.source_lang!r})"
            )
        for i, pair in enumerate(self.pairs):
            if pair.index != i:
                raise ValueError(f"pair at position {i} has index {pair.index}")

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[str, str]],
        source_lang: str,
        target_lang: str,
    ) -> "ParallelCorpus":
        return cls(
            tuple(SentencePair(i, s, t) for i, (s, t) in enumerate(pairs)),
            LanguageTag(source_lang),
            LanguageTag(target_lang),
        )

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def __getitem__(self, i: int) -> SentencePair:
        return self.pairs[i]

    @property
    def sources(self) -> list[str]:
        return [p.source for p in self.pairs]

    @property
    def targets(self) -> list[str]:
        return [p.target for p in self.pairs]

    def subset(self, indices: Iterable[int]) -> "ParallelCorpus":
        """New corpus made of the given pairs, in the given order, re-indexed."""
        return ParallelCorpus.from_pairs(
            ((self.pairs[i].source, self.pairs[i].target) for i in indices),
            self.source_lang,
            self.target_lang,
        )


@dataclass(frozen=True)
class SplitSpec:
    """How to cut a corpus down: ``full``, ``quarter``, ``first`` or ``fraction``."""

    kind: str
    k: int | None = None
    f: float | None = None
    seed: int = 0

    KINDS = ("full", "quarter", "first", "fraction")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown split kind {self.kind!r}")
        if self.kind == "first" and (self.k is None or self.k < 1):
            raise ValueError("first:K needs K >= 1")
        if self.kind == "fraction" and (self.f is None or not 0.0 < self.f <= 1.0):
            raise ValueError("fraction:F needs F in (0, 1]")

    @classmethod
    def full(cls) -> "SplitSpec":
        return cls("full")

    @classmethod
    def quarter(cls) -> "SplitSpec":
        return cls("quarter")

    @classmethod
    def first(cls, k: int) -> "SplitSpec":
        return cls("first", k=k)

    @classmethod
    def fraction(cls, f: float, seed: int = 0) -> "SplitSpec":
        return cls("fraction", f=f, seed=seed)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "SplitSpec":
        """Parse ``full``, ``quarter``, ``first:N`` or ``fraction:F``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower()
        if name in ("full", "quarter"):
            if arg:
                raise ValueError(f"{name} takes no argument")
            return cls(name)
        if name == "first":
            try:
                k = int(arg)
            except ValueError:
                raise ValueError(f"bad count in {text!r}") from None
            return cls.first(k)
        if name == "fraction":
            try:
                f = float(arg)
            except ValueError:
                raise ValueError(f"bad fraction in {text!r}") from None
            return cls.fraction(f, seed)
        raise ValueError(f"unknown split spec {text!r}")

    def __str__(self) -> str:
        if self.kind == "first":
            return f"first:{self.k}"
        if self.kind == "fraction":
            return f"fraction:{self.f}"
        return self.kind


@dataclass(frozen=True)
class CorpusStats:
    pair_count: int = 0
    source_token_count: int = 0
    target_token_count: int = 0
    empty_line_count: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "pair_count": self.pair_count,
            "source_token_count": self.source_token_count,
            "target_token_count": self.target_token_count,
            "empty_line_count": self.empty_line_count,
        }


def _scaled_count(f: float, n: int) -> int:
    # Rounding first keeps e.g. 0.7 * 10 from landing on 7.000000000000001.
    return math.floor(round(f * n, 9))


def read_lines(stream: LineSource, name: str | None = None) -> list[str]:
    """Read a line-oriented UTF-8 stream, stripping LF or CRLF terminators.

    ``stream`` may be a path, a binary or text file object, or any iterable
    of ``bytes``/``str`` lines. Byte input is decoded strictly; a decoding
    failure raises :class:`InvalidEncoding` with the absolute byte offset.
    """
    if isinstance(stream, (str, os.PathLike)):
        with open(stream, "rb") as fh:
            return read_lines(fh, name or os.fspath(stream))
    name = name or getattr(stream, "name", "<stream>")
    lines: list[str] = []
    offset = 0
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                text = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise InvalidEncoding(offset + exc.start, lineno, str(name)) from None
            offset += len(raw)
        else:
            text = raw
        if text.endswith("\n"):
            text = text[:-1]
            if text.endswith("\r"):
                text = text[:-1]
        if "\r" in text or "\n" in text:
            raise CorpusFormatError(f"{name}: line {lineno} contains a stray line terminator")
        lines.append(text)
    return lines


def load_parallel(
    source_lines: LineSource,
    target_lines: LineSource,
    source_lang: str,
    target_lang: str,
) -> ParallelCorpus:
    """Pair line *i* of ``source_lines`` with line *i* of ``target_lines``."""
    src = read_lines(source_lines)
    tgt = read_lines(target_lines)
    if len(src) != len(tgt):
        raise LineCountMismatch(len(src), len(tgt))
    return ParallelCorpus.from_pairs(zip(src, tgt), source_lang, target_lang)


def load_tsv(stream: LineSource, source_lang: str, target_lang: str) -> ParallelCorpus:
    """Load a two-column ``source<TAB>target`` file."""
    rows = []
    for lineno, line in enumerate(read_lines(stream), start=1):
        cells = line.split("\t")
        if len(cells) != 2:
            raise CorpusFormatError(
                f"line {lineno}: expected 2 tab-separated columns, found {len(cells)}"
            )
        rows.append((cells[0], cells[1]))
    return ParallelCorpus.from_pairs(rows, source_lang, target_lang)


def _open_sink(sink, stack):
    if isinstance(sink, (str, os.PathLike)):
        fh = open(sink, "wb")
        stack.append(fh)
        return fh
    return sink


def _write_lines(fh, lines: Iterable[str]) -> None:
    binary = not isinstance(fh, io.TextIOBase)
    for line in lines:
        data = line + "\n"
        fh.write(data.encode("utf-8") if binary else data)


def write_parallel(corpus: ParallelCorpus, source_sink, target_sink) -> None:
    """Write both sides, one sentence per line, LF-terminated UTF-8.

    Sinks are paths or writable file objects (binary or text).
    """
    opened: list = []
    try:
        _write_lines(_open_sink(source_sink, opened), corpus.sources)
        _write_lines(_open_sink(target_sink, opened), corpus.targets)
    finally:
        for fh in opened:
            fh.close()


def write_tsv(corpus: ParallelCorpus, sink) -> None:
    for pair in corpus:
        if "\t" in pair.source or "\t" in pair.target:
            raise CorpusFormatError(f"pair {pair.index} contains a tab character")
    opened: list = []
    try:
        _write_lines(
            _open_sink(sink, opened), (f"{p.source}\t{p.target}" for p in corpus)
        )
    finally:
        for fh in opened:
            fh.close()


def split(corpus: ParallelCorpus, spec: SplitSpec) -> ParallelCorpus:
    """Cut a corpus down according to ``spec``.

    ``quarter`` is the contiguous prefix of ``floor(n/4)`` pairs and
    ``first`` the prefix of ``k`` pairs. ``fraction`` samples
    ``floor(f*n)`` pairs without replacement and keeps their original
    relative order.
    """
    n = len(corpus)
    if spec.kind == "full":
        return corpus
    if spec.kind == "quarter":
        return ParallelCorpus(corpus.pairs[: n // 4], corpus.source_lang, corpus.target_lang)
    if spec.kind == "first":
        assert spec.k is not None
        if spec.k > n:
            raise FirstKTooLarge(spec.k, n)
        return ParallelCorpus(corpus.pairs[: spec.k], corpus.source_lang, corpus.target_lang)
    assert spec.f is not None
    m = _scaled_count(spec.f, n)
    chosen = sorted(random.Random(spec.seed).sample(range(n), m))
    return corpus.subset(chosen)


def carve_validation(
    corpus: ParallelCorpus, size: int, seed: int = 0
) -> tuple[ParallelCorpus, ParallelCorpus]:
    """Split off ``size`` randomly chosen pairs as a validation set.

    Returns ``(train, validation)``; both keep the original relative order.
    """
    n = len(corpus)
    if not 0 < size < n:
        raise SizeOutOfRange(f"validation size must be in (0, {n}), got {size}")
    held = set(random.Random(seed).sample(range(n), size))
    train = corpus.subset(i for i in range(n) if i not in held)
    validation = corpus.subset(sorted(held))
    return train, validation


def stats(corpus: ParallelCorpus) -> CorpusStats:
    from .textnorm import tokenize

    src_tokens = tgt_tokens = empty = 0
    for pair in corpus:
        s = len(tokenize(pair.source))
        t = len(tokenize(pair.target))
        src_tokens += s
        tgt_tokens += t
        if s == 0 or t == 0:
            empty += 1
    return CorpusStats(len(corpus), src_tokens, tgt_tokens, empty)

"""Sentence-to-sentence translation backends.

The sieve only ever needs a function from a source sentence to a
target-language sentence, so a "model" here is anything implementing
:class:`Translator`. Three backends ship:

``IdentityTranslator``
    returns the input; useful for testing and for same-script sanity checks.
``LexiconTranslator``
    word-for-word substitution from a Dice-coefficient lexicon learned on
    the bitext itself.
``ExternalTranslator``
    pipes sentences through a subprocess speaking one line in, one line out.
    This is how a real NMT checkpoint gets plugged in.
"""

from __future__ import annotations

import os
import shlex
import subprocess
from collections import Counter
from typing import Sequence

from .corpus import LanguageTag, ParallelCorpus
from .errors import CorpusFormatError, EmptyCorpus, TranslationFailed
from .textnorm import tokenize

DEFAULT_TIMEOUT = 600.0


class Translator:
    """Base class for translation backends.

    Subclasses implement :meth:`translate`; :meth:`translate_batch` may be
    overridden for efficiency but must agree with it element-wise.
    ``source_lang``/``target_lang`` of ``None`` mean "any direction".
    """

    name = "translator"

    def __init__(self, source_lang: str | None = None, target_lang: str | None = None):
        self.source_lang = LanguageTag(source_lang) if source_lang else None
        self.target_lang = LanguageTag(target_lang) if target_lang else None

    def translate(self, sentence: str) -> str:
        raise NotImplementedError

    def translate_batch(self, sentences: Sequence[str], first_index: int = 0) -> list[str]:
        return [self.translate(s) for s in sentences]

    def supports(self, source_lang: str, target_lang: str) -> bool:
        return (self.source_lang is None or self.source_lang == source_lang) and (
            self.target_lang is None or self.target_lang == target_lang
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.source_lang}->{self.target_lang})"


class IdentityTranslator(Translator):
    name = "identity"

    def translate(self, sentence: str) -> str:
        return sentence


class LexiconTable(dict):
    """Maps a source token to ``(target_token, dice_score)``."""

    def __init__(self, entries=()):
        super().__init__()
        items = entries.items() if isinstance(entries, dict) else entries
        for key, value in items:
            self[key] = value

    def __setitem__(self, key: str, value: tuple[str, float]) -> None:
        target, score = value
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"lexicon score out of [0, 1]: {score}")
        super().__setitem__(key, (target, float(score)))

    def dumps(self) -> str:
        return "".join(f"{s}\t{t}\t{score!r}\n" for s, (t, score) in sorted(self.items()))

    @classmethod
    def loads(cls, text: str) -> "LexiconTable":
        table = cls()
        lines = text.split("\n")
        if lines[-1] == "":
            lines.pop()
        for lineno, line in enumerate(lines, start=1):
            cells = line.split("\t")
            if len(cells) != 3:
                raise CorpusFormatError(f"lexicon line {lineno}: expected 3 columns")
            try:
                score = float(cells[2])
            except ValueError:
                raise CorpusFormatError(f"lexicon line {lineno}: bad score {cells[2]!r}") from None
            if cells[0] in table:
                raise CorpusFormatError(f"lexicon line {lineno}: duplicate entry {cells[0]!r}")
            table[cells[0]] = (cells[1], score)
        return table

    def save(self, path: str | os.PathLike[str]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path: str | os.PathLike[str]) -> "LexiconTable":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def lexicon_train(corpus: ParallelCorpus) -> LexiconTable:
    """Learn a one-best lexicon by sentence-level Dice coefficient.

    For each source token ``s`` the target token ``t`` maximizing
    ``2*cooc(s,t) / (count(s) + count(t))`` wins, where counts are numbers of
    sentences containing the token. Ties prefer ``t == s`` (so copies of
    names, numbers and punctuation survive), then the smallest ``t``.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot train a lexicon on an empty corpus")
    src_count: Counter[str] = Counter()
    tgt_count: Counter[str] = Counter()
    cooc: dict[str, Counter[str]] = {}
    for pair in corpus:
        src = set(tokenize(pair.source))
        tgt = set(tokenize(pair.target))
        src_count.update(src)
        tgt_count.update(tgt)
        if not tgt:
            continue
        for s in src:
            row = cooc.get(s)
            if row is None:
                row = cooc[s] = Counter()
            row.update(tgt)
    table = LexiconTable()
    for s in sorted(cooc):
        cs = src_count[s]
        best_key = None
        best = None
        for t, c in cooc[s].items():
            dice = 2.0 * c / (cs + tgt_count[t])
            # larger dice, then identity, then lexicographically smaller
            key = (dice, t == s)
            if best_key is None or key > best_key or (key == best_key and t < best[0]):
                best_key, best = key, (t, dice)
        if best is not None:
            table[s] = best
    return table


def lexicon_translate(table: LexiconTable, sentence: str) -> str:
    """Token-by-token substitution; unknown tokens are copied through."""
    return " ".join(table[tok][0] if tok in table else tok for tok in tokenize(sentence))


class LexiconTranslator(Translator):
    name = "lexicon"

    def __init__(self, table: LexiconTable, source_lang: str | None = None, target_lang: str | None = None):
        super().__init__(source_lang, target_lang)
        self.table = table
        self._lookup = {s: t for s, (t, _) in table.items()}

    @classmethod
    def train(cls, corpus: ParallelCorpus) -> "LexiconTranslator":
        return cls(lexicon_train(corpus), corpus.source_lang, corpus.target_lang)

    def translate(self, sentence: str) -> str:
        get = self._lookup.get
        return " ".join([get(tok, tok) for tok in tokenize(sentence)])


def external_translate(
    command: Sequence[str] | str,
    lines: Sequence[str],
    timeout: float | None = DEFAULT_TIMEOUT,
    first_index: int = 0,
) -> list[str]:
    """Run ``command`` once over a batch: one sentence per stdin line, one
    translation per stdout line, in order."""
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    if not lines:
        return []
    payload = "".join(line + "\n" for line in lines).encode("utf-8")
    try:
        proc = subprocess.run(
            argv,
            input=payload,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            timeout=timeout,
            check=False,
        )
    except subprocess.TimeoutExpired:
        raise TranslationFailed(f"timed out after {timeout} s", first_index) from None
    except OSError as exc:
        raise TranslationFailed(f"could not start {argv[0]!r}: {exc}", first_index) from None
    if proc.returncode != 0:
        err = proc.stderr.decode("utf-8", "replace").strip().splitlines()
        tail = f": {err[-1]}" if err else ""
        raise TranslationFailed(f"exit status {proc.returncode}{tail}", first_index)
    try:
        text = proc.stdout.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TranslationFailed(f"output is not UTF-8 at byte {exc.start}", first_index) from None
    out = text.split("\n")
    if out and out[-1] == "":
        out.pop()
    out = [line[:-1] if line.endswith("\r") else line for line in out]
    if len(out) != len(lines):
        raise TranslationFailed(
            f"line-count mismatch: sent {len(lines)} lines, got {len(out)}", first_index
        )
    return out


class ExternalTranslator(Translator):
    """Subprocess backend; each batch is one process invocation."""

    name = "extern"

    def __init__(
        self,
        command: Sequence[str] | str,
        source_lang: str | None = None,
        target_lang: str | None = None,
        timeout: float | None = DEFAULT_TIMEOUT,
    ):
        super().__init__(source_lang, target_lang)
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout

    def translate(self, sentence: str) -> str:
        return external_translate(self.command, [sentence], self.timeout)[0]

    def translate_batch(self, sentences: Sequence[str], first_index: int = 0) -> list[str]:
        return external_translate(self.command, sentences, self.timeout, first_index)


def translate(t: Translator, sentence: str) -> str:
    return t.translate(sentence)

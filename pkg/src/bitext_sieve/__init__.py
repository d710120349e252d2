"""Mistranslation removal for parallel corpora.

Score each training pair by sentence BLEU between a translator's output and
the stored target, and drop pairs under a cutoff derived from validation
BLEU. Ships from-scratch BLEU, METEOR and RIBES, BPE subwords, corpus
splitting and a CLI (``bitext-sieve``).
"""

__version__ = "0.1.0"

from ._accel import BACKEND
from .corpus import (
    CorpusStats,
    LanguageTag,
    ParallelCorpus,
    SentencePair,
    SplitSpec,
    carve_validation,
    load_parallel,
    load_tsv,
    split,
    stats,
    write_parallel,
)
from .metrics import (
    BleuReport,
    MeteorReport,
    NGramProfile,
    RibesReport,
    corpus_bleu,
    mean_sentence_score,
    meteor,
    ngram_profile,
    ribes,
    sentence_bleu,
)
from .sieve import FilterReport, PairScore, Threshold, compute_threshold, emit_report, filter_corpus, score_pairs
from .textnorm import BpeModel, bpe_apply, bpe_decode, bpe_learn, normalize, tokenize
from .translators import (
    ExternalTranslator,
    IdentityTranslator,
    LexiconTable,
    LexiconTranslator,
    Translator,
    external_translate,
    lexicon_train,
    lexicon_translate,
)

__all__ = [
    "BACKEND",
    "BleuReport",
    "BpeModel",
    "CorpusStats",
    "ExternalTranslator",
    "FilterReport",
    "IdentityTranslator",
    "LanguageTag",
    "LexiconTable",
    "LexiconTranslator",
    "MeteorReport",
    "NGramProfile",
    "PairScore",
    "ParallelCorpus",
    "RibesReport",
    "SentencePair",
    "SplitSpec",
    "Threshold",
    "Translator",
    "bpe_apply",
    "bpe_decode",
    "bpe_learn",
    "carve_validation",
    "compute_threshold",
    "corpus_bleu",
    "emit_report",
    "external_translate",
    "filter_corpus",
    "lexicon_train",
    "lexicon_translate",
    "load_parallel",
    "load_tsv",
    "mean_sentence_score",
    "meteor",
    "ngram_profile",
    "normalize",
    "ribes",
    "score_pairs",
    "sentence_bleu",
    "split",
    "stats",
    "tokenize",
    "write_parallel",
]

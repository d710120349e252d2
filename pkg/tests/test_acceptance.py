"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` to get a pass/fail line per criterion
in the terminal summary.
"""

import json
import math
import random
import time

import jsonschema
import pytest

import oracles
from conftest import noisy_corpus, sieve_fixture_pairs, write_bitext
from bitext_sieve import ParallelCorpus
from bitext_sieve.cli import main
from bitext_sieve.metrics import corpus_bleu, meteor, ngram_profile, ribes, sentence_bleu
from bitext_sieve.sieve import (
    REPORT_SCHEMA,
    PairScore,
    Threshold,
    compute_threshold,
    emit_report,
    filter_corpus,
    select_percentile,
)
from bitext_sieve.textnorm import bpe_apply, bpe_decode, bpe_learn
from bitext_sieve.translators import IdentityTranslator, LexiconTranslator

SCRIPTS = [
    "abcdefghij",
    "अआइईउऊएऐओक",
    "ଅଆଇଈଉଊଏଐଓକ",
    "αβγδεζηθικ",
    "一二三四五六七八九十",
    "0123456789",
]


def random_token(rng):
    alphabet = rng.choice(SCRIPTS)
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 4)))


def random_sequence(rng, lo, hi):
    return [random_token(rng) for _ in range(rng.randint(lo, hi))]


def test_criterion_01_metric_identity():
    rng = random.Random(1)
    seqs = [random_sequence(rng, 4, 40) for _ in range(1000)]
    start = time.perf_counter()
    for x in seqs:
        assert abs(sentence_bleu(x, x).score - 100.0) <= 1e-9
        assert abs(ribes(x, x).score - 1.0) <= 1e-12
        assert abs(meteor(x, x).score - (1 - 0.5 * (1 / len(x)) ** 3)) <= 1e-12
    assert time.perf_counter() - start < 5.0


def test_criterion_02_bleu_oracle():
    rng = random.Random(2)
    vocab = ["a", "b", "c", "d", "e", "क", "ख", "ଗ"]
    hyps, refs = [], []
    for _ in range(500):
        hyps.append([rng.choice(vocab) for _ in range(rng.randint(0, 25))])
        refs.append([rng.choice(vocab) for _ in range(rng.randint(1, 25))])
    start = time.perf_counter()
    for h, r in zip(hyps, refs):
        for n in range(1, 5):
            p = ngram_profile(h, r, n)
            assert (p.matched, p.total) == oracles.clipped_matches(h, r, n)
    expected, matched, totals = oracles.corpus_bleu(hyps, refs)
    report = corpus_bleu(hyps, refs)
    assert [p.matched for p in report.profiles] == matched
    assert [p.total for p in report.profiles] == totals
    assert abs(report.score - expected) <= 1e-12
    # per-pair corpora exercise the zero-match and brevity branches too
    for h, r in zip(hyps, refs):
        if h:
            assert abs(corpus_bleu([h], [r]).score - oracles.corpus_bleu([h], [r])[0]) <= 1e-12
    assert time.perf_counter() - start < 10.0


def test_criterion_03_hand_worked_vectors():
    cat = "the cat is on the mat".split()
    abcd = ["a", "b", "c", "d"]
    dcba = ["d", "c", "b", "a"]
    # 2/7 clipped unigrams, add-one smoothing on the empty higher orders
    expected = 100 * math.exp((math.log(2 / 7) + math.log(1 / 7) + math.log(1 / 6) + math.log(1 / 5)) / 4)
    assert abs(sentence_bleu(["the"] * 7, cat).score - expected) <= 1e-9
    assert abs(meteor(abcd, abcd).score - 0.9921875) <= 1e-9
    assert abs(meteor(dcba, abcd).score - 0.5) <= 1e-9
    assert abs(ribes(dcba, abcd).score - 0.0) <= 1e-9
    assert abs(ribes(["a", "b", "d", "c"], abcd).score - 5 / 6) <= 1e-9


def test_criterion_04_threshold_arithmetic(sieve_fixture):
    _, validation = sieve_fixture
    t = compute_threshold(validation, IdentityTranslator(), 4)
    assert t.cutoff == t.validation_bleu / 4
    for bleu, cutoff in [(6.916, "1.729"), (32.664, "8.166")]:
        injected = Threshold.from_bleu(bleu, 4)
        assert injected.cutoff == bleu / 4
        assert f"{injected.cutoff:.3f}" == cutoff


def test_criterion_05_split_arithmetic(tmp_path, capsys):
    n = 990_439
    start = time.perf_counter()
    src, tgt = tmp_path / "big.src", tmp_path / "big.tgt"
    src.write_text("".join(f"s{i}\n" for i in range(n)), encoding="utf-8")
    tgt.write_text("".join(f"t{i}\n" for i in range(n)), encoding="utf-8")
    assert main(["split", "--src", str(src), "--tgt", str(tgt), "--spec", "quarter", "--out-prefix", str(tmp_path / "q")]) == 0
    assert capsys.readouterr().out == "247609\n"
    assert main(["split", "--src", str(src), "--tgt", str(tgt), "--spec", "first:500000", "--out-prefix", str(tmp_path / "f")]) == 0
    assert capsys.readouterr().out == "500000\n"
    assert time.perf_counter() - start < 30.0
    with open(tmp_path / "q.src", encoding="utf-8") as fh:
        assert sum(1 for _ in fh) == 247_609


def test_criterion_06_sieve_fixture(sieve_fixture):
    train, validation = sieve_fixture
    filtered, report = filter_corpus(train, validation, IdentityTranslator(), divisor=4)
    assert report.threshold.cutoff == 25.0
    assert report.pairs_removed == 6
    expected = [p for p in sieve_fixture_pairs() if p[0] == p[1]]
    assert [(p.source, p.target) for p in filtered] == expected
    jsonschema.validate(json.loads(emit_report(report)), REPORT_SCHEMA)


def _run_filter(tmp_path, train, valid, prefix, *extra):
    argv = [
        "filter",
        "--train-src", str(train[0]), "--train-tgt", str(train[1]),
        "--valid-src", str(valid[0]), "--valid-tgt", str(valid[1]),
        "--translator", "lexicon",
        "--out-prefix", str(tmp_path / prefix),
        *extra,
    ]
    start = time.perf_counter()
    assert main(argv) == 0
    elapsed = time.perf_counter() - start
    outputs = [(tmp_path / f"{prefix}{ext}").read_bytes() for ext in (".src", ".tgt", ".report.json")]
    return outputs, elapsed


def test_criterion_07_determinism(tmp_path, capsys):
    train = write_bitext(tmp_path, "train", noisy_corpus(10_000, seed=7))
    valid = write_bitext(tmp_path, "valid", noisy_corpus(500, seed=8))
    runs = [
        _run_filter(tmp_path, train, valid, f"run{i}", "--jobs", jobs, "--per-pair")[0]
        for i, jobs in enumerate(["1", "8", "1", "8"])
    ]
    assert all(r == runs[0] for r in runs)


def test_criterion_08_monotone_and_idempotent():
    pairs = noisy_corpus(2000, seed=5)
    train = ParallelCorpus.from_pairs(pairs, "eng", "ori")
    valid = ParallelCorpus.from_pairs(noisy_corpus(200, seed=6), "eng", "ori")
    translator = LexiconTranslator.train(train)
    kept = []
    for divisor in (2, 4, 8):
        filtered, report = filter_corpus(train, valid, translator, divisor=divisor)
        kept.append(report.pairs_kept)
        again, report2 = filter_corpus(filtered, None, translator, threshold=report.threshold)
        assert report2.pairs_removed == 0
        assert again == filtered
    assert kept == sorted(kept)


def test_criterion_09_percentile():
    rng = random.Random(9)
    values = rng.sample(range(10_000), 100)
    kept = select_percentile([PairScore(i, v / 100) for i, v in enumerate(values)], 0.75)
    assert sum(kept) == 75
    threshold = sorted(values, reverse=True)[74]
    assert kept == [v >= threshold for v in values]
    for n in (1, 4, 10, 99, 1000):
        kept = select_percentile([PairScore(i, 3.5) for i in range(n)], 0.75)
        m = math.ceil(0.75 * n)
        assert kept == [True] * m + [False] * (n - m)


def test_criterion_10_bpe():
    rng = random.Random(10)
    alphabet = "abcdé@&क्ष"
    train = [[rng.choice(["low", "lower", "newest", "widest", "a@b", "x&y"]) for _ in range(5)] for _ in range(200)]
    model = bpe_learn(train, 50)
    for _ in range(1000):
        tokens = ["".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8))) for _ in range(rng.randint(0, 12))]
        assert list(bpe_decode(bpe_apply(model, tokens), model.marker)) == tokens
    forced = bpe_learn([["ab"], ["ab"], ["ac"]], 1)
    assert forced.merges == (("a", "b"),)


@pytest.mark.slow
def test_criterion_11_throughput(tmp_path, capsys):
    train = write_bitext(tmp_path, "train", noisy_corpus(100_000, seed=11))
    valid = write_bitext(tmp_path, "valid", noisy_corpus(1_000, seed=12))
    serial, t1 = _run_filter(tmp_path, train, valid, "j1", "--jobs", "1")
    parallel, t4 = _run_filter(tmp_path, train, valid, "j4", "--jobs", "4")
    print(f"jobs=1 {t1:.2f}s  jobs=4 {t4:.2f}s  speedup {t1 / t4:.2f}x")
    assert serial == parallel
    assert max(t1, t4) < 60.0
    assert t1 / t4 >= 1.2, f"no measurable speedup from 4 jobs ({t1:.2f}s vs {t4:.2f}s)"

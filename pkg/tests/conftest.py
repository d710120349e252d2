import random
import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bitext_sieve import ParallelCorpus  # noqa: E402

_CRITERION_RE = re.compile(r"test_criterion_(\d+)")
_criteria: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    m = _CRITERION_RE.search(report.nodeid)
    if m and "test_acceptance" in report.nodeid:
        _criteria.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}")


def write_bitext(directory: Path, name: str, pairs) -> tuple[Path, Path]:
    src = directory / f"{name}.src"
    tgt = directory / f"{name}.tgt"
    src.write_text("".join(s + "\n" for s, _ in pairs), encoding="utf-8")
    tgt.write_text("".join(t + "\n" for _, t in pairs), encoding="utf-8")
    return src, tgt


VOCAB_A = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta", "iota", "kappa"]
VOCAB_B = ["uno", "dos", "tres", "cuatro", "cinco", "seis", "siete", "ocho", "nueve", "diez"]


def sieve_fixture_pairs():
    """Six pairs whose target equals the source, six with disjoint vocabularies."""
    rng = random.Random(12)
    pairs = []
    for i in range(6):
        words = [rng.choice(VOCAB_A) for _ in range(6)]
        pairs.append((" ".join(words), " ".join(words)))
        pairs.append((" ".join(rng.choice(VOCAB_A) for _ in range(6)), " ".join(rng.choice(VOCAB_B) for _ in range(6))))
    return pairs


@pytest.fixture
def sieve_fixture():
    train = ParallelCorpus.from_pairs(sieve_fixture_pairs(), "eng", "ori")
    validation = ParallelCorpus.from_pairs(
        [("a b c d", "a b c d"), ("e f g h", "e f g h"), ("one two three four", "one two three four"), ("w x y z", "w x y z")],
        "eng",
        "ori",
    )
    return train, validation


def noisy_corpus(n: int, seed: int = 0, noise: float = 0.3):
    """Synthetic bitext: target is a word-for-word substitution of the source,
    with a share of pairs corrupted by shuffling or replacing words."""
    rng = random.Random(seed)
    src_vocab = [f"s{i}" for i in range(400)]
    mapping = {w: f"t{i}" for i, w in enumerate(src_vocab)}
    pairs = []
    for _ in range(n):
        words = [rng.choice(src_vocab) for _ in range(rng.randint(4, 14))]
        target = [mapping[w] for w in words]
        roll = rng.random()
        if roll < noise / 2:
            target = [mapping[rng.choice(src_vocab)] for _ in target]
        elif roll < noise:
            rng.shuffle(target)
        pairs.append((" ".join(words), " ".join(target)))
    return pairs

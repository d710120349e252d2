"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--pairs 20000] [--repeat 3]

Times each kernel over the same random sentence pairs, then times end-to-end
pair scoring under each backend in a fresh interpreter (the backend is picked
at import, so switching needs a new process).
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from bitext_sieve._accel import available_backends

SCORING = """
import random, time
from bitext_sieve import _accel
from bitext_sieve.corpus import ParallelCorpus
from bitext_sieve.sieve import score_pairs
from bitext_sieve.translators import LexiconTranslator

rng = random.Random(0)
vocab = [f"w{i}" for i in range(300)]
pairs = []
for _ in range(N_PAIRS):
    s = " ".join(rng.choice(vocab) for _ in range(rng.randint(5, 30)))
    t = " ".join(rng.choice(vocab) for _ in range(rng.randint(5, 30)))
    pairs.append((s, t))
corpus = ParallelCorpus.from_pairs(pairs, "src", "tgt")
translator = LexiconTranslator.train(corpus)
start = time.perf_counter()
score_pairs(corpus, translator)
print(_accel.BACKEND, time.perf_counter() - start)
"""


def make_pairs(n: int, seed: int = 0) -> list[tuple[list[str], list[str]]]:
    rng = random.Random(seed)
    vocab = [f"w{i}" for i in range(200)]
    return [
        (
            [rng.choice(vocab) for _ in range(rng.randint(5, 40))],
            [rng.choice(vocab) for _ in range(rng.randint(5, 40))],
        )
        for _ in range(n)
    ]


def bench_kernels(pairs, repeat: int) -> None:
    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the pure-Python kernels are available")
    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for kernel in ("ngram_matches", "align_nearest", "kendall_counts"):
        times = {}
        for name, mod in backends.items():
            fn = getattr(mod, kernel)
            if kernel == "kendall_counts":
                seqs = [mod.align_nearest(h, r) for h, r in pairs]
                seqs = [[j for j in s if j >= 0] for s in seqs]
                call = lambda: [fn(s) for s in seqs]  # noqa: E731
            else:
                call = lambda: [fn(h, r) for h, r in pairs]  # noqa: E731
            times[name] = min(timeit.repeat(call, number=1, repeat=repeat))
        speedup = times["python"] / times["cython"] if "cython" in times else 1.0
        cells = "".join(f"{times[name]:>11.3f}s" for name in backends)
        print(f"{kernel:<16}{cells}{speedup:>9.2f}x")


def bench_scoring(n: int) -> None:
    print(f"\nend-to-end score_pairs on {n} pairs")
    for pure in ("0", "1"):
        env = dict(os.environ, BITEXT_SIEVE_PURE_PYTHON=pure)
        out = subprocess.run(
            [sys.executable, "-c", SCORING.replace("N_PAIRS", str(n))], env=env, capture_output=True, text=True, check=True
        ).stdout.split()
        print(f"  {out[0]:<8}{float(out[1]):8.3f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    bench_kernels(make_pairs(args.pairs), args.repeat)
    bench_scoring(args.pairs)


if __name__ == "__main__":
    main()

"""The compiled and pure-Python kernels must agree exactly."""

import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bitext_sieve import _accel
from bitext_sieve import _kernels_py

BACKENDS = _accel.available_backends()

toks = st.lists(st.sampled_from(list("abcde")), max_size=20)


@pytest.fixture(params=sorted(BACKENDS))
def kernels(request):
    return BACKENDS[request.param]


def test_compiled_backend_is_built():
    # the editable install compiles the extension; a missing .so means a broken build
    assert "cython" in BACKENDS
    forced = os.environ.get("BITEXT_SIEVE_PURE_PYTHON", "") not in ("", "0")
    assert _accel.BACKEND == ("python" if forced else "cython")


@settings(max_examples=300)
@given(toks, toks)
def test_ngram_matches_against_oracle(hyp, ref):
    for mod in BACKENDS.values():
        matched, totals = mod.ngram_matches(hyp, ref, 4)
        for n in range(1, 5):
            assert (matched[n - 1], totals[n - 1]) == oracles.clipped_matches(hyp, ref, n)


@settings(max_examples=300)
@given(toks, toks)
def test_align_nearest_backends_agree(hyp, ref):
    results = [mod.align_nearest(hyp, ref) for mod in BACKENDS.values()]
    assert all(r == results[0] for r in results)
    used = [j for j in results[0] if j >= 0]
    assert len(used) == len(set(used))
    for i, j in enumerate(results[0]):
        if j >= 0:
            assert hyp[i] == ref[j]


@settings(max_examples=200)
@given(st.permutations(list(range(12))))
def test_kendall_against_oracle(perm):
    for mod in BACKENDS.values():
        assert tuple(mod.kendall_counts(perm)) == oracles.kendall(perm)


def test_align_nearest_prefers_closest_then_leftmost(kernels):
    # hyp position 2 sees "x" at ref 0 (dist 2) and ref 4 (dist 2): leftmost wins
    assert kernels.align_nearest(["a", "b", "x"], ["x", "b", "c", "d", "x"]) == [-1, 1, 0]
    # hyp position 3 sees "x" at 0 (dist 3) and 4 (dist 1)
    assert kernels.align_nearest(["a", "b", "c", "x"], ["x", "b", "c", "d", "x"]) == [-1, 1, 2, 4]


def test_long_inputs_take_fallback(kernels):
    rng = random.Random(3)
    hyp = [rng.choice("abcdef") for _ in range(700)]
    ref = [rng.choice("abcdef") for _ in range(650)]
    assert kernels.ngram_matches(hyp, ref, 4) == _kernels_py.ngram_matches(hyp, ref, 4)


def test_empty_inputs(kernels):
    assert kernels.ngram_matches([], [], 4) == ([0, 0, 0, 0], [0, 0, 0, 0])
    assert kernels.ngram_matches(["a"], [], 4) == ([0, 0, 0, 0], [1, 0, 0, 0])
    assert kernels.align_nearest([], ["a"]) == []
    assert kernels.align_nearest(["a"], []) == [-1]
    assert tuple(kernels.kendall_counts([])) == (0, 0)

"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``BITEXT_SIEVE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("BITEXT_SIEVE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined,no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

ngram_matches = _impl.ngram_matches
align_nearest = _impl.align_nearest
kendall_counts = _impl.kendall_counts


def available_backends() -> dict[str, object]:
    """Every importable kernel module, keyed by backend name."""
    found: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        found["cython"] = _kernels
    except ImportError:
        pass
    return found

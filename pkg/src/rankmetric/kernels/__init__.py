"""Batched small-field rank kernels.

The compiled Cython kernel is preferred when it was built; the pure-numpy
twin is always available.  Set RANKMETRIC_PURE=1 to force the fallback.
``IMPLEMENTATION`` records which one is active; ``benchmarks/bench_rank.py``
compares the two.
"""

import os

from ._slowrank import rank_batch as rank_batch_python

if os.environ.get("RANKMETRIC_PURE") == "1":
    rank_batch = rank_batch_python
    IMPLEMENTATION = "python"
else:
    try:
        from ._fastrank import rank_batch  # type: ignore[attr-defined]
        IMPLEMENTATION = "cython"
    except ImportError:
        rank_batch = rank_batch_python
        IMPLEMENTATION = "python"

__all__ = ["rank_batch", "rank_batch_python", "IMPLEMENTATION"]

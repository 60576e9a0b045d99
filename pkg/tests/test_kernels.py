import numpy as np
import pytest

from rankmetric.gf import build_context
from rankmetric.kernels import IMPLEMENTATION, rank_batch, rank_batch_python
from rankmetric.linalg import fq_rank


@pytest.mark.parametrize("p,e,n", [(2, 1, 4), (3, 1, 5), (5, 1, 4),
                                   (2, 2, 4), (2, 3, 3)])
def test_kernels_match_reference_rref(p, e, n):
    ctx = build_context(p, e, n)
    rng = np.random.default_rng(p * 100 + e * 10 + n)
    mats = rng.integers(0, ctx.q, size=(300, n, n)).astype(np.uint8)
    tables = (ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg)
    got = rank_batch_python(mats, *tables)
    expected = np.array([fq_rank(ctx, m) for m in mats], dtype=np.int32)
    assert (got == expected).all()
    fast = rank_batch(mats, *tables)
    assert (fast == expected).all()


def test_edge_cases():
    ctx = build_context(2, 1, 3)
    tables = (ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg)
    empty = np.zeros((0, 3, 3), dtype=np.uint8)
    assert rank_batch(empty, *tables).shape == (0,)
    zero = np.zeros((2, 3, 3), dtype=np.uint8)
    assert (rank_batch(zero, *tables) == 0).all()
    eye = np.broadcast_to(np.eye(3, dtype=np.uint8), (4, 3, 3)).copy()
    assert (rank_batch(eye, *tables) == 3).all()


def test_inputs_not_mutated():
    ctx = build_context(3, 1, 4)
    tables = (ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg)
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 3, size=(10, 4, 4)).astype(np.uint8)
    before = mats.copy()
    rank_batch(mats, *tables)
    rank_batch_python(mats, *tables)
    assert (mats == before).all()


def test_implementation_marker():
    assert IMPLEMENTATION in ("cython", "python")

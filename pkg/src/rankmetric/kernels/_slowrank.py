"""Pure-numpy batched rank computation over a small field F_q.

Matrices are (B, n, n) uint8 arrays whose entries index into the context's
``fq_codes`` ordering (0 is the zero of F_q).  All arithmetic goes through
the q x q lookup tables, so the routine works for prime and prime-power q.

The elimination is vectorized across the batch axis: per column we pick an
active pivot row for every matrix simultaneously, clear the column in the
other rows, and retire the pivot row.
"""

from __future__ import annotations

import numpy as np


def rank_batch(mats, add, mul, inv, neg):
    """Ranks of a batch of n x n matrices over F_q.

    mats: (B, n, n) uint8, entry values in [0, q).
    add, mul: (q, q) uint8 tables; inv, neg: (q,) uint8 tables.
    Returns (B,) int32.
    """
    A = np.array(mats, dtype=np.uint8, copy=True)
    B, n, _ = A.shape
    if B == 0:
        return np.zeros(0, dtype=np.int32)
    idx = np.arange(B)
    rows = np.arange(n)
    active = np.ones((B, n), dtype=bool)
    rank = np.zeros(B, dtype=np.int32)
    for col in range(n):
        colvals = A[:, :, col]
        cand = active & (colvals != 0)
        has = cand.any(axis=1)
        if not has.any():
            continue
        p = np.argmax(cand, axis=1)
        pivrow = A[idx, p]                       # (B, n)
        pivval = pivrow[:, col]
        safe_piv = np.where(pivval == 0, 1, pivval)
        pivrow = mul[inv[safe_piv][:, None], pivrow]
        elim = (colvals != 0) & active & (rows[None, :] != p[:, None]) \
            & has[:, None]
        factors = neg[colvals]
        updated = add[A, mul[factors[:, :, None], pivrow[:, None, :]]]
        A = np.where(elim[:, :, None], updated, A)
        retire = has
        active[idx[retire], p[retire]] = False
        rank += retire.astype(np.int32)
    return rank

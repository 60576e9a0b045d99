"""Gaussian elimination over the two fields the package works with.

Two families of routines:

* ``fq_*``   -- matrices over the small subfield F_q, entries stored as
  uint8 indices into ``ctx.fq_codes`` (0 is zero, 1 is one).  All row
  operations go through the precomputed q x q tables, so they work for
  prime and non-prime q alike.
* ``codes_*`` -- matrices over the big field F_{q^n}, entries stored as
  int64 element codes.  Dimensions here are tiny (at most n columns).

All reductions produce the reduced row echelon form with unit pivots and
zeros above and below, so echelon bases are canonical per subspace.
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------------------
# F_q matrices (uint8 index entries)
# ---------------------------------------------------------------------------

def fq_rref(ctx, A):
    """Reduced row echelon form over F_q.  Returns (R, pivot_columns)."""
    R = np.array(A, dtype=np.uint8, copy=True)
    if R.ndim != 2:
        raise ValueError("matrix expected")
    add, mul, inv, neg = ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = R[r:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        piv = R[r, c]
        if piv != 1:
            R[r] = mul[inv[piv], R[r]]
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if len(others):
            factors = neg[R[others, c]]
            R[others] = add[R[others], mul[factors[:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def fq_rank(ctx, A):
    _, pivots = fq_rref(ctx, A)
    return len(pivots)


def fq_reduce_against(ctx, R, pivots, v):
    """Remainder of row vector v after reduction against an RREF basis."""
    add, mul, neg = ctx.fq_add, ctx.fq_mul, ctx.fq_neg
    v = np.array(v, dtype=np.uint8, copy=True)
    for i, c in enumerate(pivots):
        if v[c]:
            v = add[v, mul[neg[v[c]], R[i]]]
    return v


def fq_in_rowspace(ctx, R, pivots, v):
    return not fq_reduce_against(ctx, R, pivots, v).any()


def fq_nullspace(ctx, A):
    """Basis (RREF) of {x : A x^T = 0}, rows are the basis vectors."""
    R, pivots = fq_rref(ctx, A)
    ncols = A.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    neg = ctx.fq_neg
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = neg[R[j, fc]]
    if len(basis):
        basis, _ = fq_rref(ctx, basis)
    return basis


def fq_matmul(ctx, A, B):
    """Matrix product over F_q via the operation tables."""
    add, mul = ctx.fq_add, ctx.fq_mul
    A = np.asarray(A, dtype=np.uint8)
    B = np.asarray(B, dtype=np.uint8)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
    for k in range(A.shape[1]):
        out = add[out, mul[A[:, k][:, None], B[k][None, :]]]
    return out


def fq_inv_matrix(ctx, A):
    """Inverse of a square matrix over F_q, or None if singular."""
    n = A.shape[0]
    aug = np.concatenate([np.asarray(A, dtype=np.uint8),
                          np.eye(n, dtype=np.uint8)], axis=1)
    R, pivots = fq_rref(ctx, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return R[:, n:]


# ---------------------------------------------------------------------------
# F_{q^n} matrices (int64 code entries)
# ---------------------------------------------------------------------------

def codes_rref(ctx, A):
    """Reduced row echelon form over F_{q^n}.  Returns (R, pivot_columns)."""
    R = np.array(A, dtype=np.int64, copy=True)
    ZERO = ctx.ZERO
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c] != ZERO)[0]
        if len(nz) == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        piv = int(R[r, c])
        if piv != 0:  # code 0 is the element one
            R[r] = ctx.v_scalar_mul(ctx.inv_c(piv), R[r])
        for i in range(nrows):
            if i != r and R[i, c] != ZERO:
                f = ctx.neg_c(int(R[i, c]))
                R[i] = ctx.v_add(R[i], ctx.v_scalar_mul(f, R[r]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def codes_rank(ctx, A):
    _, pivots = codes_rref(ctx, A)
    return len(pivots)


def codes_reduce_against(ctx, R, pivots, v):
    v = np.array(v, dtype=np.int64, copy=True)
    for i, c in enumerate(pivots):
        if v[c] != ctx.ZERO:
            f = ctx.neg_c(int(v[c]))
            v = ctx.v_add(v, ctx.v_scalar_mul(f, R[i]))
    return v


def codes_in_rowspace(ctx, R, pivots, v):
    return bool((codes_reduce_against(ctx, R, pivots, v) == ctx.ZERO).all())


def codes_nullspace(ctx, A):
    R, pivots = codes_rref(ctx, A)
    ncols = A.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.full((len(free), ncols), ctx.ZERO, dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 0  # one
        for j, pc in enumerate(pivots):
            basis[i, pc] = ctx.neg_c(int(R[j, fc]))
    if len(basis):
        basis, _ = codes_rref(ctx, basis)
    return basis


def codes_solve(ctx, A, b):
    """One solution x of A x = b over F_{q^n}, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.concatenate([A, b], axis=1)
    R, pivots = codes_rref(ctx, aug)
    ncols = A.shape[1]
    if ncols in pivots:
        return None
    x = np.full(ncols, ctx.ZERO, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, ncols]
    return x

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of the numpy rank kernel.

Same contract as ``_slowrank.rank_batch``: (B, n, n) uint8 matrices whose
entries index fq_codes, arithmetic through the (q, q) lookup tables.
Plain per-matrix forward elimination; the batch loop is the hot path.
"""

import numpy as np

cimport numpy as cnp


def rank_batch(mats, add, mul, inv, neg):
    cdef cnp.uint8_t[:, :, ::1] A = np.array(mats, dtype=np.uint8,
                                             order="C", copy=True)
    cdef const cnp.uint8_t[:, ::1] add_t = np.ascontiguousarray(add)
    cdef const cnp.uint8_t[:, ::1] mul_t = np.ascontiguousarray(mul)
    cdef const cnp.uint8_t[::1] inv_t = np.ascontiguousarray(inv)
    cdef const cnp.uint8_t[::1] neg_t = np.ascontiguousarray(neg)
    cdef Py_ssize_t B = A.shape[0], n = A.shape[1]
    out = np.zeros(B, dtype=np.int32)
    cdef cnp.int32_t[::1] rank = out
    cdef Py_ssize_t b, r, c, i, j, pr
    cdef cnp.uint8_t pv, iv, f, tmp
    for b in range(B):
        r = 0
        for c in range(n):
            pr = -1
            for i in range(r, n):
                if A[b, i, c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(c, n):
                    tmp = A[b, r, j]
                    A[b, r, j] = A[b, pr, j]
                    A[b, pr, j] = tmp
            pv = A[b, r, c]
            if pv != 1:
                iv = inv_t[pv]
                for j in range(c, n):
                    A[b, r, j] = mul_t[iv, A[b, r, j]]
            for i in range(r + 1, n):
                if A[b, i, c] != 0:
                    f = neg_t[A[b, i, c]]
                    for j in range(c, n):
                        A[b, i, j] = add_t[A[b, i, j],
                                           mul_t[f, A[b, r, j]]]
            r += 1
            if r == n:
                break
        rank[b] = <cnp.int32_t> r
    return out

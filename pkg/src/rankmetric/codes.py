"""Rank-distance codes as subspaces of q-polynomials.

A code is stored in canonical reduced-echelon basis form, either

* ``"fqn"`` -- an F_{q^n}-linear-on-the-left code: rows are coefficient
  vectors in F_{q^n}^n, echelonized over F_{q^n}; or
* ``"fq"``  -- a plain F_q-linear code: rows are flattened n^2-dimensional
  F_q-coordinate vectors, echelonized over F_q.

Canonical bases make subspace equality syntactic equality.  Enumeration of
codewords feeds coefficient batches through the rank kernels; operations
that would exceed the enumeration budget degrade to seeded sampling and
say so in their result, never silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels, linalg
from .errors import (
    BudgetExceeded,
    ContextMismatch,
    NotInvertible,
    ScalarModeMismatch,
)
from .gf import FieldContext, FieldElement
from .linpoly import LinearizedPoly

FQN = "fqn"
FQ = "fq"

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 15


def gaussian_binomial(k, m, Q):
    """Number of m-dimensional subspaces of a k-dimensional space over F_Q."""
    if m < 0 or m > k:
        return 0
    num = den = 1
    for i in range(m):
        num *= Q ** (k - i) - 1
        den *= Q ** (i + 1) - 1
    return num // den


@dataclass
class RankDistribution:
    """Histogram rank -> number of codewords (zero word included)."""

    counts: dict

    def total(self):
        return sum(self.counts.values())

    def min_nonzero_rank(self):
        nz = [r for r, c in self.counts.items() if r > 0 and c > 0]
        return min(nz) if nz else None

    def as_csv(self):
        lines = ["rank,count"]
        for r in sorted(self.counts):
            lines.append(f"{r},{self.counts[r]}")
        return "\n".join(lines) + "\n"


VERIFIED_TRUE = "verified_true"
VERIFIED_FALSE = "verified_false"
SAMPLED_CONSISTENT = "sampled_consistent"


@dataclass
class MrdResult:
    status: str
    witness: Optional[LinearizedPoly] = None
    samples: int = 0

    def holds(self):
        """True unless MRD-ness was positively refuted."""
        return self.status != VERIFIED_FALSE

    @property
    def verified(self):
        return self.status in (VERIFIED_TRUE, VERIFIED_FALSE)


class RdCode:
    """An F_q- or F_{q^n}-linear subspace of q-polynomials."""

    def __init__(self, ctx: FieldContext, scalars, mat, _canonical=False):
        self.ctx = ctx
        self.scalars = scalars
        if scalars == FQN:
            mat = np.asarray(mat, dtype=np.int64).reshape(-1, ctx.n)
            if not _canonical:
                mat, _ = linalg.codes_rref(ctx, mat) if len(mat) else (mat, [])
        elif scalars == FQ:
            mat = np.asarray(mat, dtype=np.uint8).reshape(-1, ctx.n * ctx.n)
            if not _canonical:
                mat, _ = linalg.fq_rref(ctx, mat) if len(mat) else (mat, [])
        else:
            raise ValueError(f"unknown scalar mode {scalars!r}")
        self._mat = mat
        self._pivots = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_span_fqn(cls, gens, ctx=None):
        """F_{q^n}-span (left scalar action) of the given q-polynomials."""
        ctx = _common_ctx(gens, ctx)
        if not gens:
            return cls(ctx, FQN, np.zeros((0, ctx.n), dtype=np.int64))
        rows = np.stack([g.coeff_vector() for g in gens])
        return cls(ctx, FQN, rows)

    @classmethod
    def from_span_fq(cls, gens, ctx=None):
        """F_q-span of the given q-polynomials."""
        ctx = _common_ctx(gens, ctx)
        if not gens:
            return cls(ctx, FQ,
                       np.zeros((0, ctx.n * ctx.n), dtype=np.uint8))
        rows = np.stack([g.fq_vector() for g in gens])
        return cls(ctx, FQ, rows)

    @classmethod
    def zero_code(cls, ctx, scalars=FQN):
        return cls.from_span_fqn([], ctx) if scalars == FQN \
            else cls.from_span_fq([], ctx)

    @classmethod
    def full_space(cls, ctx):
        """All of the n^2-dimensional algebra, as an F_{q^n}-linear code."""
        return cls(ctx, FQN, _identity_codes(ctx))

    # -- dimensions --------------------------------------------------------

    @property
    def k_fqn(self):
        if self.scalars != FQN:
            raise ScalarModeMismatch("k_fqn is defined for fqn codes only")
        return self._mat.shape[0]

    @property
    def dim_fq(self):
        if self.scalars == FQN:
            return self._mat.shape[0] * self.ctx.n
        return self._mat.shape[0]

    def cardinality(self):
        return self.ctx.q ** self.dim_fq

    def is_zero(self):
        return self._mat.shape[0] == 0

    @property
    def basis(self):
        """Canonical basis as LinearizedPoly objects."""
        if self.scalars == FQN:
            return [LinearizedPoly.from_coeff_vector(self.ctx, row)
                    for row in self._mat]
        return [LinearizedPoly.from_fq_vector(self.ctx, row)
                for row in self._mat]

    def _rref(self):
        if self._pivots is None:
            if self.scalars == FQN:
                _, piv = linalg.codes_rref(self.ctx, self._mat) \
                    if len(self._mat) else (None, [])
            else:
                _, piv = linalg.fq_rref(self.ctx, self._mat) \
                    if len(self._mat) else (None, [])
            self._pivots = piv
        return self._mat, self._pivots

    # -- membership and lattice operations --------------------------------

    def _check_compatible(self, other, need_same_scalars=True):
        if not isinstance(other, RdCode):
            raise TypeError("RdCode expected")
        if other.ctx is not self.ctx:
            raise ContextMismatch("codes from different contexts")
        if need_same_scalars and other.scalars != self.scalars:
            raise ScalarModeMismatch(
                "operation requires matching scalar modes; "
                "downgrade with as_fq() first")

    def contains(self, f: LinearizedPoly):
        if f.ctx is not self.ctx:
            raise ContextMismatch("polynomial from another context")
        R, piv = self._rref()
        if self.scalars == FQN:
            return linalg.codes_in_rowspace(self.ctx, self._mat, piv,
                                            f.coeff_vector())
        return linalg.fq_in_rowspace(self.ctx, self._mat, piv, f.fq_vector())

    def intersection(self, other):
        self._check_compatible(other)
        A, B = self._mat, other._mat
        if self.is_zero() or other.is_zero():
            return RdCode.zero_code(self.ctx, self.scalars)
        if self.scalars == FQN:
            S = np.concatenate([A.T, B.T], axis=1)
            null = linalg.codes_nullspace(self.ctx, S)
            rows = [_codes_vecmat(self.ctx, z[:A.shape[0]], A) for z in null]
            mat = np.stack(rows) if rows else \
                np.zeros((0, self.ctx.n), dtype=np.int64)
            return RdCode(self.ctx, FQN, mat)
        S = np.concatenate([A.T, B.T], axis=1)
        null = linalg.fq_nullspace(self.ctx, S)
        rows = [linalg.fq_matmul(self.ctx, z[None, :A.shape[0]], A)[0]
                for z in null]
        mat = np.stack(rows) if rows else \
            np.zeros((0, self.ctx.n ** 2), dtype=np.uint8)
        return RdCode(self.ctx, FQ, mat)

    def span_sum(self, other):
        self._check_compatible(other)
        return RdCode(self.ctx, self.scalars,
                      np.concatenate([self._mat, other._mat]))

    def shift(self, s):
        """C^[s]: apply the Frobenius shift to every codeword."""
        ctx = self.ctx
        if self.scalars == FQN:
            mat = np.full_like(self._mat, ctx.ZERO)
            s_ = s % ctx.n
            for i in range(ctx.n):
                mat[:, (i + s_) % ctx.n] = ctx.v_frob(self._mat[:, i], s_)
            return RdCode(ctx, FQN, mat)
        polys = [f.frobenius_shift(s) for f in self.basis]
        return RdCode.from_span_fq(polys, ctx)

    # -- duality, adjoint, equivalence ------------------------------------

    def dual(self):
        """Delsarte dual under b(f, g) = Tr(sum f_i g_i)."""
        ctx = self.ctx
        if self.scalars == FQN:
            # scalar closure upgrades the trace pairing to the plain
            # coefficient pairing over F_{q^n}
            if self.is_zero():
                return RdCode.full_space(ctx)
            null = linalg.codes_nullspace(ctx, self._mat)
            return RdCode(ctx, FQN, null)
        if self.is_zero():
            return RdCode(ctx, FQ, _fq_full_rows(ctx))
        gram = _trace_gram(ctx)
        null = linalg.fq_nullspace(
            ctx, linalg.fq_matmul(ctx, self._mat, gram).astype(np.uint8))
        return RdCode(ctx, FQ, null)

    def adjoint_code(self):
        """Element-wise adjoint; promotes back to fqn mode when possible."""
        polys = [f.adjoint() for f in self._fq_basis_polys()]
        out = RdCode.from_span_fq(polys, self.ctx)
        if self.scalars == FQN:
            promoted = out.try_promote()
            if promoted is not None:
                return promoted
        return out

    def apply_equivalence(self, h, g, sigma_exp=0):
        """The equivalent code {h o f^sigma o g : f in C}."""
        if not h.is_invertible() or not g.is_invertible():
            raise NotInvertible("equivalence maps must be invertible")
        polys = [h.compose(f.field_automorphism(sigma_exp)).compose(g)
                 for f in self._fq_basis_polys()]
        out = RdCode.from_span_fq(polys, self.ctx)
        if self.scalars == FQN:
            promoted = out.try_promote()
            if promoted is not None:
                return promoted
        return out

    def as_fq(self):
        """Explicit downgrade to the F_q-echelonized representation."""
        if self.scalars == FQ:
            return self
        return RdCode.from_span_fq(self._fq_basis_polys(), self.ctx)

    def try_promote(self):
        """Promote an fq code to fqn mode if it is closed under the left
        action of a generator of F_{q^n}; returns None otherwise."""
        if self.scalars == FQN:
            return self
        ctx = self.ctx
        gen = ctx.generator
        polys = self.basis
        for f in polys:
            if not self.contains(f.scale(gen)):
                return None
        promoted = RdCode.from_span_fqn(polys, ctx)
        if promoted.k_fqn * ctx.n != self.dim_fq:
            return None
        return promoted

    def _fq_basis_polys(self):
        if self.scalars == FQ:
            return self.basis
        ctx = self.ctx
        out = []
        for f in self.basis:
            for bc in ctx.fq_basis_codes:
                out.append(f.scale(ctx.element(bc)))
        return out

    # -- enumeration -------------------------------------------------------

    def projective_count(self):
        if self.scalars != FQN:
            raise ScalarModeMismatch("projective enumeration needs fqn mode")
        Q = self.ctx.size
        k = self.k_fqn
        return (Q**k - 1) // (Q - 1)

    def full_count(self):
        return self.ctx.q ** self.dim_fq

    def _images(self):
        """(k, n) array: row j holds basis_j evaluated at the F_q-basis."""
        ctx = self.ctx
        polys = self.basis
        img = np.full((len(polys), ctx.n), ctx.ZERO, dtype=np.int64)
        for j, f in enumerate(polys):
            for c, bc in enumerate(ctx.fq_basis_codes):
                img[j, c] = f.evaluate(ctx.element(bc)).code
        return img

    def _coeff_batches_projective(self, chunk=_CHUNK):
        """Yield (B, k) arrays of F_{q^n} coefficient codes, one projective
        representative per scalar class (leading coefficient one)."""
        ctx, k = self.ctx, self.k_fqn
        N = ctx.size
        for t in range(k):
            tail = k - t - 1
            total = N**tail
            for start in range(0, total, chunk):
                stop = min(start + chunk, total)
                block = np.arange(start, stop, dtype=np.int64)
                coeffs = np.full((stop - start, k), ctx.ZERO, dtype=np.int64)
                coeffs[:, t] = 0  # leading coefficient one
                rem = block
                for j in range(k - 1, t, -1):
                    rem, digit = np.divmod(rem, N)
                    coeffs[:, j] = _value_to_code(ctx, digit)
                yield coeffs

    def _coeff_batches_full(self, chunk=_CHUNK):
        """Yield (B, d) arrays of F_q coefficient codes over the F_q basis
        (zero tuple included)."""
        ctx = self.ctx
        d = self._mat.shape[0]
        q = ctx.q
        fq_codes = np.array(ctx.fq_codes, dtype=np.int64)
        total = q**d
        for start in range(0, total, chunk):
            stop = min(start + chunk, total)
            block = np.arange(start, stop, dtype=np.int64)
            coeffs = np.full((stop - start, d), ctx.ZERO, dtype=np.int64)
            rem = block
            for j in range(d - 1, -1, -1):
                rem, digit = np.divmod(rem, q)
                coeffs[:, j] = fq_codes[digit]
            yield coeffs

    def _matrices_for(self, img, coeffs):
        ctx = self.ctx
        Bn = (coeffs.shape[0], ctx.n)
        S = np.full(Bn, ctx.ZERO, dtype=np.int64)
        for j in range(coeffs.shape[1]):
            prod = ctx.v_mul(np.broadcast_to(coeffs[:, j][:, None], Bn),
                             np.broadcast_to(img[j][None, :], Bn))
            S = ctx.v_add(S, prod)
        return ctx._coords[S].transpose(0, 2, 1)

    def _rank_scan(self, projective, budget, chunk=_CHUNK):
        """Iterate (coeffs, ranks) over the whole code."""
        ctx = self.ctx
        img = self._images()
        batches = self._coeff_batches_projective(chunk) if projective \
            else self._coeff_batches_full(chunk)
        for coeffs in batches:
            mats = self._matrices_for(img, coeffs)
            ranks = kernels.rank_batch(mats, ctx.fq_add, ctx.fq_mul,
                                       ctx.fq_inv, ctx.fq_neg)
            yield coeffs, ranks

    def codewords(self, projective=False, budget=DEFAULT_BUDGET):
        """Iterator over codewords (projective: one per scalar class)."""
        ctx = self.ctx
        if projective:
            if self.scalars != FQN:
                raise ScalarModeMismatch("projective mode needs fqn scalars")
            count = self.projective_count()
        else:
            count = self.full_count()
        if count > budget:
            raise BudgetExceeded(count)
        polys = self.basis
        if projective:
            batches = self._coeff_batches_projective()
        else:
            batches = self._coeff_batches_full()
        for coeffs in batches:
            for row in coeffs:
                yield _combine(ctx, polys, row)

    def min_distance(self, budget=DEFAULT_BUDGET):
        """Minimum rank of a nonzero codeword, by exhaustive enumeration."""
        dist = self.rank_distribution(budget)
        mn = dist.min_nonzero_rank()
        if mn is None:
            raise ValueError("minimum distance of the zero code")
        return mn

    def rank_distribution(self, budget=DEFAULT_BUDGET):
        ctx = self.ctx
        if self.is_zero():
            return RankDistribution({0: 1})
        projective = self.scalars == FQN
        count = self.projective_count() if projective else self.full_count()
        if count > budget:
            raise BudgetExceeded(count)
        hist = np.zeros(ctx.n + 1, dtype=np.int64)
        for _, ranks in self._rank_scan(projective, budget):
            hist += np.bincount(ranks, minlength=ctx.n + 1)
        counts = {0: 1}
        if projective:
            scale = ctx.size - 1
            for r in range(1, ctx.n + 1):
                if hist[r]:
                    counts[r] = int(hist[r]) * scale
        else:
            hist[0] -= 1  # drop the zero tuple
            for r in range(1, ctx.n + 1):
                if hist[r]:
                    counts[r] = int(hist[r])
        return RankDistribution(counts)

    def sample_min_rank(self, samples=10**5, seed=0):
        """Minimum rank over random nonzero codewords (upper-bound witness)."""
        if self.is_zero():
            raise ValueError("zero code has no nonzero codewords")
        ctx = self.ctx
        rng = np.random.default_rng(seed)
        img = self._images()
        k = self._mat.shape[0]
        best = ctx.n + 1
        done = 0
        while done < samples:
            B = min(_CHUNK, samples - done)
            if self.scalars == FQN:
                vals = rng.integers(0, ctx.size, size=(B, k))
                nz = (vals != 0).any(axis=1)
                vals = vals[nz]
                coeffs = _value_to_code(ctx, vals)
            else:
                idx = rng.integers(0, ctx.q, size=(B, k))
                nz = (idx != 0).any(axis=1)
                idx = idx[nz]
                coeffs = np.array(ctx.fq_codes, dtype=np.int64)[idx]
            done += B
            if coeffs.shape[0] == 0:
                continue
            mats = self._matrices_for(img, coeffs)
            ranks = kernels.rank_batch(mats, ctx.fq_add, ctx.fq_mul,
                                       ctx.fq_inv, ctx.fq_neg)
            best = min(best, int(ranks.min()))
        return best

    def mrd_target_distance(self):
        """The distance an MRD code of this size must attain, or None."""
        n = self.ctx.n
        if self.dim_fq == 0 or self.dim_fq % n != 0:
            return None
        return n - self.dim_fq // n + 1

    def is_mrd(self, budget=DEFAULT_BUDGET, samples=10**5, seed=0):
        """MRD check: exhaustive within budget, seeded sampling beyond."""
        ctx = self.ctx
        target = self.mrd_target_distance()
        if target is None:
            return MrdResult(VERIFIED_FALSE, None, 0)
        projective = self.scalars == FQN
        count = self.projective_count() if projective else self.full_count()
        if count <= budget:
            for coeffs, ranks in self._rank_scan(projective, budget):
                bad = np.nonzero(ranks < target)[0]
                if projective:
                    if len(bad):
                        w = _combine(ctx, self.basis, coeffs[bad[0]])
                        return MrdResult(VERIFIED_FALSE, w)
                else:
                    for b in bad:
                        if ranks[b] > 0 or \
                                (coeffs[b] != ctx.ZERO).any():
                            w = _combine(ctx, self.basis, coeffs[b])
                            if not w.is_zero():
                                return MrdResult(VERIFIED_FALSE, w)
            return MrdResult(VERIFIED_TRUE)
        mn = self.sample_min_rank(samples, seed)
        if mn < target:
            return MrdResult(VERIFIED_FALSE, None, samples)
        return MrdResult(SAMPLED_CONSISTENT, None, samples)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {"ctx": self.ctx.to_json(),
                "scalars": self.scalars,
                "basis": [f.to_json() for f in self.basis]}

    @classmethod
    def from_json(cls, obj, ctx=None):
        from .gf import FieldContext
        if ctx is None:
            ctx = FieldContext.from_json(obj["ctx"])
        polys = [LinearizedPoly.from_json(ctx, b) for b in obj["basis"]]
        if obj["scalars"] == FQN:
            return cls.from_span_fqn(polys, ctx)
        return cls.from_span_fq(polys, ctx)

    def __eq__(self, other):
        if not isinstance(other, RdCode):
            return NotImplemented
        return (self.ctx is other.ctx and self.scalars == other.scalars
                and self._mat.shape == other._mat.shape
                and bool((self._mat == other._mat).all()))

    def __hash__(self):
        return hash((id(self.ctx), self.scalars, self._mat.tobytes()))

    def __repr__(self):
        dim = f"k_fqn={self.k_fqn}" if self.scalars == FQN \
            else f"dim_fq={self.dim_fq}"
        return f"RdCode({self.ctx!r}, {self.scalars}, {dim})"


def random_code(ctx, k, scalars=FQN, seed=0):
    """Uniformly random subspace of the requested dimension."""
    rng = np.random.default_rng(seed)
    limit = ctx.n if scalars == FQN else ctx.n**2
    if k > limit:
        raise ValueError(f"dimension {k} exceeds ambient {limit}")
    while True:
        if scalars == FQN:
            vals = rng.integers(0, ctx.size, size=(k, ctx.n))
            mat = _value_to_code(ctx, vals)
            code = RdCode(ctx, FQN, mat)
            if code.k_fqn == k:
                return code
        else:
            vals = rng.integers(0, ctx.q, size=(k, ctx.n**2)).astype(np.uint8)
            code = RdCode(ctx, FQ, vals)
            if code.dim_fq == k:
                return code


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _common_ctx(gens, ctx):
    if gens:
        c = gens[0].ctx
        for g in gens[1:]:
            if g.ctx is not c:
                raise ContextMismatch("generators from different contexts")
        if ctx is not None and ctx is not c:
            raise ContextMismatch("generators do not match the context")
        return c
    if ctx is None:
        raise ValueError("empty generator list needs an explicit context")
    return ctx


def _identity_codes(ctx):
    mat = np.full((ctx.n, ctx.n), ctx.ZERO, dtype=np.int64)
    np.fill_diagonal(mat, 0)
    return mat


def _fq_full_rows(ctx):
    d = ctx.n**2
    return np.eye(d, dtype=np.uint8)


def _codes_vecmat(ctx, x, A):
    """Row vector times matrix over F_{q^n}."""
    out = np.full(A.shape[1], ctx.ZERO, dtype=np.int64)
    for j, xc in enumerate(x):
        if xc != ctx.ZERO:
            out = ctx.v_add(out, ctx.v_scalar_mul(int(xc), A[j]))
    return out


def _value_to_code(ctx, vals):
    """Map integers 0..N-1 to element codes (0 -> zero, v -> log v-1)."""
    vals = np.asarray(vals, dtype=np.int64)
    return np.where(vals == 0, ctx.ZERO, vals - 1)


def _combine(ctx, polys, coeff_codes):
    acc = LinearizedPoly.zero(ctx)
    for f, c in zip(polys, coeff_codes):
        c = int(c)
        if c != ctx.ZERO:
            acc = acc + f.scale(ctx.element(c))
    return acc


_GRAM_CACHE = {}


def _trace_gram(ctx):
    """Block-diagonal Gram matrix of b on F_q-coordinates (uint8 indices)."""
    key = id(ctx)
    if key not in _GRAM_CACHE:
        n = ctx.n
        T = np.zeros((n, n), dtype=np.uint8)
        for t, bt in enumerate(ctx.fq_basis_codes):
            for u, bu in enumerate(ctx.fq_basis_codes):
                tr = ctx.trace_c(ctx.mul_c(bt, bu))
                T[t, u] = ctx._fq_index[tr]
        G = np.zeros((n * n, n * n), dtype=np.uint8)
        for i in range(n):
            G[i * n:(i + 1) * n, i * n:(i + 1) * n] = T
        _GRAM_CACHE[key] = G
    return _GRAM_CACHE[key]

"""Distinguishers for rank-distance codes.

Idealisers, the intersection invariant h(C), the constructive tests for
equivalence to (twisted) Gabidulin codes, the certified-bounds Gabidulin
index search, and the reference-table comparison driver.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .codes import (
    DEFAULT_BUDGET,
    FQ,
    FQN,
    MrdResult,
    RdCode,
    SAMPLED_CONSISTENT,
    VERIFIED_FALSE,
    VERIFIED_TRUE,
    gaussian_binomial,
    random_code,
)
from .errors import (
    BudgetExceeded,
    KTooSmall,
    NotFqnLinear,
    NotMrd,
)
from .families import FamilySpec, norm_condition_holds
from .gf import FieldElement
from .linpoly import LinearizedPoly


# ---------------------------------------------------------------------------
# idealisers
# ---------------------------------------------------------------------------

@dataclass
class IdealiserResult:
    side: str
    basis: list
    order_exponent: int
    is_field: bool
    field_check_sampled: bool = False


def _algebra_basis(ctx):
    """The n^2 maps theta_u x^[i], ordered to match fq_vector layout."""
    out = []
    for i in range(ctx.n):
        for theta in ctx.fq_basis:
            out.append(LinearizedPoly.monomial(ctx, i, theta))
    return out


def _idealiser(C, side, budget=DEFAULT_BUDGET, seed=0):
    ctx = C.ctx
    n2 = ctx.n**2
    Bmat = C.as_fq()._mat
    if Bmat.shape[0] == n2:
        # the full algebra stabilizes itself on both sides
        basis = _algebra_basis(ctx)
        return IdealiserResult(side, basis, n2, False)
    ann = linalg.fq_nullspace(ctx, Bmat)
    alg = _algebra_basis(ctx)
    if side == "right" and C.scalars == FQN:
        # f o phi is F_{q^n}-linear in f, so k constraints suffice
        constraints_from = C.basis
    else:
        constraints_from = C._fq_basis_polys()
    blocks = []
    for f in constraints_from:
        M = np.empty((n2, n2), dtype=np.uint8)
        for t, b in enumerate(alg):
            g = b.compose(f) if side == "left" else f.compose(b)
            M[:, t] = g.fq_vector()
        blocks.append(linalg.fq_matmul(ctx, ann, M))
    big = np.concatenate(blocks) if blocks else np.zeros((0, n2),
                                                         dtype=np.uint8)
    null = linalg.fq_nullspace(ctx, big)
    basis = [LinearizedPoly.from_fq_vector(ctx, v) for v in null]
    m = len(basis)
    is_field, sampled = _field_check(ctx, basis, null, budget, seed)
    return IdealiserResult(side, basis, m, is_field, sampled)


def _field_check(ctx, basis, null_rref, budget, seed):
    """Closure under composition plus invertibility of nonzero elements."""
    if not basis:
        return False, False
    R, piv = linalg.fq_rref(ctx, null_rref)
    ident = LinearizedPoly.identity(ctx).fq_vector()
    if not linalg.fq_in_rowspace(ctx, R, piv, ident):
        return False, False
    for a in basis:
        for b in basis:
            v = a.compose(b).fq_vector()
            if not linalg.fq_in_rowspace(ctx, R, piv, v):
                return False, False
    sub = RdCode.from_span_fq(basis, ctx)
    if sub.full_count() <= 2**16:
        dist = sub.rank_distribution(budget=2**16)
        invertible = set(dist.counts) <= {0, ctx.n}
        return invertible, False
    mn = sub.sample_min_rank(samples=10**3, seed=seed)
    return mn == ctx.n, True


def left_idealiser(C, budget=DEFAULT_BUDGET, seed=0):
    """Maps phi with phi o f in C for all f in C."""
    return _idealiser(C, "left", budget, seed)


def right_idealiser(C, budget=DEFAULT_BUDGET, seed=0):
    """Maps phi with f o phi in C for all f in C."""
    return _idealiser(C, "right", budget, seed)


# ---------------------------------------------------------------------------
# intersection invariant h(C)
# ---------------------------------------------------------------------------

@dataclass
class HInvariant:
    value: int
    arg: int
    mode: str  # "fqn" or "fq": the field the dimensions are taken over

    def __iter__(self):
        return iter((self.value, self.arg))


def _dim(C):
    return C.k_fqn if C.scalars == FQN else C.dim_fq


def h_invariant(C):
    """max over j coprime to n of dim(C intersect C^[j]), with its arg."""
    if C.is_zero():
        raise ValueError("h invariant of the zero code")
    n = C.ctx.n
    best, arg = -1, None
    for j in range(1, n):
        if math.gcd(j, n) != 1:
            continue
        d = _dim(C.intersection(C.shift(j)))
        if d > best:
            best, arg = d, j
    return HInvariant(best, arg, C.scalars)


# ---------------------------------------------------------------------------
# equivalence to generalized Gabidulin codes
# ---------------------------------------------------------------------------

def _require_fqn(C):
    if C.scalars != FQN:
        raise NotFqnLinear("an F_{q^n}-linear code is required")


def _require_mrd(C, budget, seed):
    res = C.is_mrd(budget=budget, seed=seed)
    if res.status == VERIFIED_FALSE:
        raise NotMrd("code is verifiably not MRD")
    return res


def _gab_condition(C):
    """Smallest s coprime to n with dim(C intersect C^[s]) = k - 1."""
    n, k = C.ctx.n, C.k_fqn
    for s in range(1, n):
        if math.gcd(s, n) != 1:
            continue
        if C.intersection(C.shift(s)).k_fqn == k - 1:
            return s
    return None


def is_equiv_gabidulin(C, budget=DEFAULT_BUDGET, seed=0):
    """Smallest s certifying equivalence to G_{k,s}, or None.

    For k = 1 the criterion is invertibility of the single generator.
    """
    _require_fqn(C)
    _require_mrd(C, budget, seed)
    if C.k_fqn == 1:
        return 1 if C.basis[0].is_invertible() else None
    return _gab_condition(C)


# ---------------------------------------------------------------------------
# equivalence to twisted Gabidulin codes (constructive recovery)
# ---------------------------------------------------------------------------

@dataclass
class TwistedWitness:
    s: int
    p: LinearizedPoly
    q_complement: LinearizedPoly
    eta: FieldElement


def _quotient_image(C, vec):
    """Canonical coordinates of vec in F_{q^n}^n modulo the code."""
    R, piv = C._rref()
    return linalg.codes_reduce_against(C.ctx, C._mat, piv, vec)


def _twisted_attempt(C, s):
    """One pass of the recovery procedure; returns (witness, failed_step)."""
    ctx, n, k = C.ctx, C.ctx.n, C.k_fqn
    V = C.intersection(C.shift(s))
    if V.k_fqn != k - 2:
        return None, "dim(C^C[s])"
    if V.intersection(C.shift(2 * s)).k_fqn != k - 3:
        return None, "dim(C^C[s]^C[2s])"
    U = V.shift(-s).span_sum(V)
    if U.k_fqn != k - 1:
        return None, "dim(U)"
    W = U
    for i in range(1, k - 1):
        W = W.intersection(U.shift(i * s))
    if W.k_fqn != 1:
        return None, "dim(W)"
    r = W.basis[0]
    p = r.frobenius_shift(-s * (k - 1))
    chain = [p.frobenius_shift(s * i) for i in range(1, k)]
    if RdCode.from_span_fqn(chain) != U:
        return None, "U=<p[s..s(k-1)]>"
    q_complement = None
    for f in C.basis:
        if not U.contains(f):
            q_complement = f
            break
    if q_complement is None:
        return None, "complement"
    if not p.is_invertible():
        return None, "p invertible"
    u1 = _quotient_image(C, p.coeff_vector())
    u2 = _quotient_image(C, p.frobenius_shift(s * k).coeff_vector())
    eta = _solve_proportionality(ctx, u1, u2)
    if eta is None:
        return None, "eta solve"
    if not norm_condition_holds(ctx, k, eta):
        return None, "norm(eta)"
    return TwistedWitness(s, p, q_complement, eta), None


def _solve_proportionality(ctx, u1, u2):
    """eta with u1 = -eta u2 coordinate-wise, nonzero and consistent."""
    Z = ctx.ZERO
    if (u1 == Z).all() and (u2 == Z).all():
        return None
    eta_code = None
    for a, b in zip(u1.tolist(), u2.tolist()):
        if b == Z:
            if a != Z:
                return None
            continue
        cand = ctx.neg_c(ctx.mul_c(a, ctx.inv_c(b))) if a != Z \
            else None
        if a == Z:
            return None  # u2 coordinate nonzero but u1 zero: eta = 0
        if eta_code is None:
            eta_code = cand
        elif eta_code != cand:
            return None
    if eta_code is None:
        return None
    return ctx.element(eta_code)


def is_equiv_twisted(C, budget=DEFAULT_BUDGET, seed=0, trace=None):
    """Recover a twisted-Gabidulin witness (s, p, q, eta), or None.

    ``trace``, if a dict, records the failing recovery step per tried s.
    """
    _require_fqn(C)
    if C.k_fqn <= 2:
        raise KTooSmall("recovery needs dimension k > 2")
    _require_mrd(C, budget, seed)
    n = C.ctx.n
    for s in range(1, n):
        if math.gcd(s, n) != 1:
            continue
        witness, failed = _twisted_attempt(C, s)
        if witness is not None:
            return witness
        if trace is not None:
            trace[s] = failed
    return None


# ---------------------------------------------------------------------------
# Gabidulin index with certified bounds
# ---------------------------------------------------------------------------

CERTIFIED = "certified"
WITNESSED = "witnessed"
BUDGET_LIMITED = "budget-limited"


@dataclass
class IndexResult:
    lower: int
    upper: int
    witness: Optional[RdCode]
    status: str


def _subcode_qualifies(D, budget):
    """Qualification test: MRD (within budget) plus the h-condition."""
    m = D.k_fqn
    if m == 1:
        return D.basis[0].is_invertible()
    if _gab_condition(D) is None:
        return False
    if D.projective_count() > budget:
        return None  # cannot certify
    return D.is_mrd(budget=budget).status == VERIFIED_TRUE


def _monomial_witness(C, m):
    """Consecutive monomial progressions x^[a], x^[a+s], ... inside C."""
    ctx, n = C.ctx, C.ctx.n
    present = [a for a in range(n)
               if C.contains(LinearizedPoly.monomial(ctx, a))]
    pres = set(present)
    for s in range(1, n):
        if math.gcd(s, n) != 1:
            continue
        for a in present:
            run = [(a + s * i) % n for i in range(m)]
            if all(r in pres for r in run):
                gens = [LinearizedPoly.monomial(ctx, r) for r in run]
                D = RdCode.from_span_fqn(gens)
                if D.k_fqn == m:
                    return D
    return None


def _chain_witness(C, m, seed):
    """Subcodes <u, u^[j], ..., u^[(m-1)j]> with u invertible.

    Candidates u live in the intersection of the back-shifted copies of C,
    which guarantees the whole chain stays inside C.
    """
    ctx, n = C.ctx, C.ctx.n
    rng = np.random.default_rng(seed)
    for j in range(1, n):
        if math.gcd(j, n) != 1:
            continue
        W = C
        for i in range(1, m):
            W = W.intersection(C.shift(-i * j))
            if W.is_zero():
                break
        if W.is_zero():
            continue
        for u in _candidate_polys(W, rng):
            if not u.is_invertible():
                continue
            chain = [u.frobenius_shift(i * j) for i in range(m)]
            D = RdCode.from_span_fqn(chain)
            if D.k_fqn == m:
                return D
    return None


def _candidate_polys(W, rng, cap=512, extra=100):
    yield from W.basis
    if W.projective_count() <= cap:
        seen = set()
        for f in W.codewords(projective=True, budget=cap):
            if f.coeffs not in seen:
                seen.add(f.coeffs)
                yield f
        return
    ctx = W.ctx
    for _ in range(extra):
        coeffs = [ctx.random_element(rng) for _ in range(W.k_fqn)]
        f = LinearizedPoly.zero(ctx)
        for c, b in zip(coeffs, W.basis):
            f = f + b.scale(c)
        if not f.is_zero():
            yield f


def _invertible_codeword(C, budget, seed):
    """A rank-n codeword, with a certificate of absence when exhaustive."""
    ctx = C.ctx
    if C.projective_count() <= budget:
        for coeffs, ranks in C._rank_scan(True, budget):
            hit = np.nonzero(ranks == ctx.n)[0]
            if len(hit):
                polys = C.basis
                f = LinearizedPoly.zero(ctx)
                for b, c in zip(polys, coeffs[hit[0]]):
                    if int(c) != ctx.ZERO:
                        f = f + b.scale(ctx.element(int(c)))
                return f, True
        return None, True  # certified absent
    mn = ctx.n + 1
    rng = np.random.default_rng(seed)
    for _ in range(10**4):
        f = LinearizedPoly.zero(ctx)
        for b in C.basis:
            f = f + b.scale(ctx.random_element(rng))
        if not f.is_zero() and f.is_invertible():
            return f, False
    return None, False


def _exhaustive_scan(C, m, budget):
    """Scan every m-dimensional subcode; certifies presence or absence.

    Returns (witness_or_None, certified_bool).
    """
    ctx, k = C.ctx, C.k_fqn
    Q = ctx.size
    total = gaussian_binomial(k, m, Q)
    if total > budget:
        return None, False
    elements = [ctx.ZERO] + list(range(Q - 1))
    basis = C.basis
    for pivots in itertools.combinations(range(k), m):
        free = [(i, c) for i in range(m) for c in range(pivots[i] + 1, k)
                if c not in pivots]
        for assign in itertools.product(elements, repeat=len(free)):
            rows = np.full((m, k), ctx.ZERO, dtype=np.int64)
            for i, p in enumerate(pivots):
                rows[i, p] = 0  # one
            for (i, c), v in zip(free, assign):
                rows[i, c] = v
            gens = []
            for i in range(m):
                f = LinearizedPoly.zero(ctx)
                for c in range(k):
                    if rows[i, c] != ctx.ZERO:
                        f = f + basis[c].scale(ctx.element(int(rows[i, c])))
                gens.append(f)
            D = RdCode.from_span_fqn(gens)
            if D.k_fqn != m:
                continue
            if _subcode_qualifies(D, budget):
                return D, True
    return None, True


def _random_search(C, m, budget, seed, attempts=20):
    ctx, k = C.ctx, C.k_fqn
    Q = ctx.size
    if (Q**m - 1) // (Q - 1) > budget:
        return None  # subcode MRD check could not be certified anyway
    rng = np.random.default_rng(seed)
    basis = C.basis
    for _ in range(attempts):
        gens = []
        for _ in range(m):
            f = LinearizedPoly.zero(ctx)
            for b in basis:
                f = f + b.scale(ctx.random_element(rng))
            gens.append(f)
        D = RdCode.from_span_fqn(gens)
        if D.k_fqn != m:
            continue
        if _subcode_qualifies(D, budget):
            return D
    return None


def gabidulin_index(C, budget=DEFAULT_BUDGET, seed=0):
    """Certified bounds on the largest Gabidulin-equivalent subcode.

    The search runs over F_{q^n}-linear subcodes.  Lower bounds come with
    a witness subcode; the upper bound drops below k - 1 only when a full
    scan of a dimension fits in the budget and comes up empty.
    """
    _require_fqn(C)
    k = C.k_fqn
    if k == 0:
        return IndexResult(0, 0, None, CERTIFIED)
    # whole code: the h-condition is necessary, MRD-ness completes it
    if _gab_condition(C) is not None or k == 1:
        qualifies = _subcode_qualifies(C, budget)
        if qualifies:
            return IndexResult(k, k, C, CERTIFIED)
        if qualifies is None:
            # h-condition holds but MRD could not be certified
            upper = k
        else:
            upper = k - 1
    else:
        upper = k - 1
    lower = 0
    witness = None
    certain_upper = upper
    for m in range(min(upper, k - 1), 0, -1):
        if m == 1:
            f, certified = _invertible_codeword(C, budget, seed)
            if f is not None:
                lower, witness = 1, RdCode.from_span_fqn([f])
            elif certified:
                certain_upper = 0
            break
        D = _monomial_witness(C, m)
        if D is None:
            D = _chain_witness(C, m, seed)
        if D is None:
            D, certified = _exhaustive_scan(C, m, budget)
            if D is None and certified:
                certain_upper = m - 1
                continue
        if D is None:
            D = _random_search(C, m, budget, seed)
        if D is not None:
            lower, witness = m, D
            break
    upper = min(upper, certain_upper)
    if lower > upper:  # witness beats a stale exclusion bookkeeping entry
        upper = lower
    status = CERTIFIED if lower == upper else BUDGET_LIMITED
    return IndexResult(lower, upper, witness, status)


# ---------------------------------------------------------------------------
# reports, fingerprints, the reference-table driver
# ---------------------------------------------------------------------------

@dataclass
class InvariantReport:
    h_value: int
    h_arg: int
    h_mode: str
    ind_lower: Optional[int]
    ind_upper: Optional[int]
    ind_status: Optional[str]
    L_exp: int
    R_exp: int
    L_is_field: bool
    R_is_field: bool
    min_distance_status: str
    rank_profile: dict

    def to_json(self):
        return {
            "h": self.h_value, "h_arg": self.h_arg, "h_mode": self.h_mode,
            "ind": [self.ind_lower, self.ind_upper],
            "ind_status": self.ind_status,
            "L_exp": self.L_exp, "R_exp": self.R_exp,
            "L_is_field": self.L_is_field, "R_is_field": self.R_is_field,
            "min_distance_status": self.min_distance_status,
            "rank_profile": {str(r): c
                             for r, c in sorted(self.rank_profile.items())},
        }


def invariant_report(C, budget=DEFAULT_BUDGET, seed=0, with_index=True):
    hv = h_invariant(C)
    L = left_idealiser(C, budget, seed)
    R = right_idealiser(C, budget, seed)
    if with_index and C.scalars == FQN:
        idx = gabidulin_index(C, budget, seed)
        lo, hi, st = idx.lower, idx.upper, idx.status
    else:
        lo = hi = st = None
    count = C.projective_count() if C.scalars == FQN else C.full_count()
    if count <= budget:
        profile = C.rank_distribution(budget).counts
        md_status = "exhaustive"
    else:
        profile = {C.sample_min_rank(seed=seed): -1}
        md_status = "sampled"
    return InvariantReport(hv.value, hv.arg, hv.mode, lo, hi, st,
                           L.order_exponent, R.order_exponent,
                           L.is_field, R.is_field, md_status, profile)


def fingerprint(C, samples=2000, seed=0, budget=DEFAULT_BUDGET):
    """Equivalence-invariant summary: h, idealiser exponents, rank profile.

    The rank profile is exact when enumeration fits the budget, otherwise
    a seeded sample; sampled profiles of equivalent codes agree only in
    distribution, so compare them with ``fingerprints_agree``.
    """
    hv = h_invariant(C)
    L = left_idealiser(C, budget, seed)
    R = right_idealiser(C, budget, seed)
    count = C.projective_count() if C.scalars == FQN else C.full_count()
    if count <= budget:
        profile = {r: c / max(C.cardinality() - 1, 1)
                   for r, c in C.rank_distribution(budget).counts.items()
                   if r > 0}
        exact = True
    else:
        profile, exact = _sampled_profile(C, samples, seed)
    return {"dim_fq": C.dim_fq, "h": hv.value,
            "L_exp": L.order_exponent, "R_exp": R.order_exponent,
            "profile": profile, "profile_exact": exact}


def _sampled_profile(C, samples, seed):
    ctx = C.ctx
    rng = np.random.default_rng(seed)
    img = C._images()
    k = C._mat.shape[0]
    hist = np.zeros(ctx.n + 1, dtype=np.int64)
    drawn = 0
    while drawn < samples:
        B = min(1 << 14, samples - drawn)
        if C.scalars == FQN:
            vals = rng.integers(0, ctx.size, size=(B, k))
        else:
            vals = rng.integers(0, ctx.q, size=(B, k))
        nz = (vals != 0).any(axis=1)
        vals = vals[nz]
        drawn += B
        if not len(vals):
            continue
        if C.scalars == FQN:
            coeffs = np.where(vals == 0, ctx.ZERO, vals - 1)
        else:
            coeffs = np.array(ctx.fq_codes, dtype=np.int64)[vals]
        mats = C._matrices_for(img, coeffs)
        from . import kernels
        ranks = kernels.rank_batch(mats, ctx.fq_add, ctx.fq_mul,
                                   ctx.fq_inv, ctx.fq_neg)
        hist += np.bincount(ranks, minlength=ctx.n + 1)
    total = hist[1:].sum()
    return ({r: hist[r] / total for r in range(1, ctx.n + 1)
             if hist[r]}, False)


def fingerprints_agree(f1, f2, tol=0.02):
    """Exact match on the certified fields, tolerance on sampled profiles."""
    for key in ("dim_fq", "h", "L_exp", "R_exp"):
        if f1[key] != f2[key]:
            return False
    p1, p2 = f1["profile"], f2["profile"]
    if f1["profile_exact"] and f2["profile_exact"]:
        return p1 == p2
    ranks = set(p1) | set(p2)
    tv = sum(abs(p1.get(r, 0.0) - p2.get(r, 0.0)) for r in ranks) / 2
    return tv <= tol


MATCH = "match"
CONSISTENT = "consistent"
MISMATCH = "mismatch"


def table1_row(spec: FamilySpec, budget=DEFAULT_BUDGET, seed=0):
    """Compute one row of the reference table and diff it."""
    ctx, C = spec.build()
    exp = spec.expected
    hv = h_invariant(C)
    R = right_idealiser(C, budget, seed)
    idx = gabidulin_index(C, budget, seed)
    h_ok = hv.value == exp["h_value"]
    r_ok = R.order_exponent == exp["R_exp"]
    if idx.status == CERTIFIED:
        ind_ok = idx.lower == exp["ind"]
        certified_ind = True
    else:
        ind_ok = idx.lower <= exp["ind"] <= idx.upper
        certified_ind = False
    if h_ok and r_ok and ind_ok and certified_ind:
        status = MATCH
    elif h_ok and r_ok and ind_ok:
        status = CONSISTENT
    else:
        status = MISMATCH
    return {
        "family": spec.tag, "q": spec.q, "n": ctx.n, "k": exp["k_fqn"],
        "h": hv.value, "h_arg": hv.arg,
        "ind": [idx.lower, idx.upper], "ind_status": idx.status,
        "R_exp": R.order_exponent, "R_is_field": R.is_field,
        "expected": {"h": exp["h_value"], "ind": exp["ind"],
                     "R_exp": exp["R_exp"]},
        "fixture_match": status != MISMATCH,
        "status": status,
    }


def mrd_fraction(ctx, k, trials, budget=DEFAULT_BUDGET, seed=0):
    """Fraction of random k-dimensional fqn codes that are MRD."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    hits = 0
    for t in range(trials):
        C = random_code(ctx, k, scalars=FQN, seed=seed * 1000003 + t)
        if C.projective_count() > budget:
            raise BudgetExceeded(C.projective_count())
        if C.is_mrd(budget=budget).status == VERIFIED_TRUE:
            hits += 1
    return hits / trials

import math

import numpy as np
import pytest

from rankmetric import families as fam
from rankmetric import invariants as inv
from rankmetric.codes import FQ, RdCode, random_code
from rankmetric.errors import KTooSmall, NotFqnLinear, NotMrd
from rankmetric.linpoly import LinearizedPoly as LP, random_poly


# -- idealisers -------------------------------------------------------------

def test_gabidulin_idealisers_are_scalar_maps(ctx25):
    G = fam.gabidulin(ctx25, 2, 1)
    L = inv.left_idealiser(G)
    R = inv.right_idealiser(G)
    assert L.order_exponent == 5 and R.order_exponent == 5
    assert L.is_field and R.is_field
    scalars = RdCode.from_span_fq(
        [LP.scalar_map(ctx25, b) for b in ctx25.fq_basis])
    assert RdCode.from_span_fq(L.basis) == scalars
    assert RdCode.from_span_fq(R.basis) == scalars


def test_full_space_idealiser_is_whole_algebra(ctx24):
    full = RdCode.full_space(ctx24)
    L = inv.left_idealiser(full)
    assert L.order_exponent == ctx24.n**2
    assert not L.is_field


def test_idealiser_closure_and_identity(ctx34):
    eta = fam.default_eta(ctx34, 2)
    H = fam.twisted(ctx34, 2, 1, eta)
    for side in (inv.left_idealiser, inv.right_idealiser):
        res = side(H)
        span = RdCode.from_span_fq(res.basis)
        assert span.contains(LP.identity(ctx34))
        for a in res.basis:
            for b in res.basis:
                assert span.contains(a.compose(b))


def test_twisted_nonzero_h_idealiser_orders():
    # L and R orders follow gcd(n, h) and gcd(n, sk - h)
    ctx = fam.context_for_q(3, 6)
    eta = fam.default_eta(ctx, 3)
    H = fam.twisted(ctx, 3, 1, eta, h_twist=2)
    assert H.scalars == FQ
    L = inv.left_idealiser(H)
    R = inv.right_idealiser(H)
    assert L.order_exponent == math.gcd(6, 2)
    assert R.order_exponent == math.gcd(6, 3 * 1 - 2)
    assert L.is_field and R.is_field


# -- h invariant ------------------------------------------------------------

def test_h_examples(ctx25, ctx35, fixture_codes):
    assert inv.h_invariant(fam.gabidulin(ctx25, 3, 1)).value == 2
    eta = fam.default_eta(ctx35, 3)
    assert inv.h_invariant(fam.twisted(ctx35, 3, 1, eta)).value == 1
    assert inv.h_invariant(fixture_codes["C3"][2]).value == 1
    assert inv.h_invariant(fixture_codes["D2"][2]).value == 4


def test_h_mode_flag(ctx34):
    eta = fam.default_eta(ctx34, 2)
    H = fam.twisted(ctx34, 2, 1, eta, h_twist=1)
    hv = inv.h_invariant(H)
    assert hv.mode == "fq"


# -- Gabidulin equivalence --------------------------------------------------

def test_gab_equivalence_fires_on_gabidulin(ctx25):
    assert inv.is_equiv_gabidulin(fam.gabidulin(ctx25, 3, 2)) == 2
    one_dim = RdCode.from_span_fqn([LP.monomial(ctx25, 2)])
    assert inv.is_equiv_gabidulin(one_dim) == 1


def test_gab_equivalence_rejects_twisted(ctx35):
    eta = fam.default_eta(ctx35, 3)
    H = fam.twisted(ctx35, 3, 1, eta)
    assert inv.is_equiv_gabidulin(H) is None


def test_gab_equivalence_preconditions(ctx24, ctx25):
    with pytest.raises(NotFqnLinear):
        inv.is_equiv_gabidulin(fam.gabidulin(ctx25, 2, 1).as_fq())
    bad = RdCode.from_span_fqn([LP.monomial(ctx24, 0),
                                LP.monomial(ctx24, 2)])
    with pytest.raises(NotMrd):
        inv.is_equiv_gabidulin(bad)


def test_gab_criterion_agrees_with_h(ctx34):
    # two independent code paths: smallest-s search vs h = k - 1
    found = 0
    for seed in range(40):
        C = random_code(ctx34, 2, seed=seed)
        if C.is_mrd().status != "verified_true":
            continue
        found += 1
        fires = inv.is_equiv_gabidulin(C) is not None
        assert fires == (inv.h_invariant(C).value == C.k_fqn - 1)
    assert found > 0


# -- twisted equivalence ----------------------------------------------------

def test_twisted_recovery_on_twisted(ctx35):
    for s in (1, 2):
        eta = fam.default_eta(ctx35, 3)
        H = fam.twisted(ctx35, 3, s, eta)
        w = inv.is_equiv_twisted(H)
        assert w is not None and w.s == s
        assert w.p.is_invertible()
        assert fam.norm_condition_holds(ctx35, 3, w.eta)
        # the defining relation p + eta p^[sk] lies in the code
        rel = w.p + w.p.frobenius_shift(w.s * 3).scale(w.eta)
        assert H.contains(rel)
        # chain plus complement spans the code
        chain = [w.p.frobenius_shift(w.s * i) for i in (1, 2)]
        U = RdCode.from_span_fqn(chain)
        assert U.span_sum(RdCode.from_span_fqn([w.q_complement])) == H


def test_twisted_recovery_rejects_gabidulin(ctx35):
    trace = {}
    assert inv.is_equiv_twisted(fam.gabidulin(ctx35, 3, 1),
                                trace=trace) is None
    # at s = 1 the intersection is k - 1 dimensional, not k - 2
    assert trace[1] == "dim(C^C[s])"
    assert set(trace) == {1, 2, 3, 4}


def test_twisted_recovery_rejects_c3(fixture_codes):
    _, ctx, C3 = fixture_codes["C3"]
    trace = {}
    assert inv.is_equiv_twisted(C3, trace=trace) is None
    assert trace  # the failing step is reported as data


def test_twisted_recovery_invariant_under_equivalence(ctx35, rng):
    eta = fam.default_eta(ctx35, 3)
    H = fam.twisted(ctx35, 3, 1, eta)
    for _ in range(5):
        g = random_poly(ctx35, rng, invertible=True)
        alpha = ctx35.random_element(rng, nonzero=True)
        t = int(rng.integers(0, ctx35.n))
        sig = int(rng.integers(0, ctx35.e * ctx35.n))
        E = H.apply_equivalence(LP.monomial(ctx35, t, alpha), g, sig)
        w = inv.is_equiv_twisted(E)
        assert w is not None
        assert w.eta.norm() == eta.norm()  # q prime: norm class is exact


def test_twisted_scalar_robustness(ctx35, rng):
    # replacing p by lambda p multiplies eta by a norm-one factor
    sk = 3
    for _ in range(20):
        lam = ctx35.random_element(rng, nonzero=True)
        factor = lam ** (ctx35.q**sk - 1)
        assert factor.norm() == ctx35.one


def test_twisted_preconditions(ctx35):
    with pytest.raises(KTooSmall):
        inv.is_equiv_twisted(fam.gabidulin(ctx35, 2, 1))


def test_twisted_degenerate_regime(ctx34):
    # at n = k + 1 the twisted construction collapses onto the Gabidulin
    # class: h = k - 1 and the recovery procedure correctly finds nothing
    eta = fam.default_eta(ctx34, 3)
    H = fam.twisted(ctx34, 3, 1, eta)
    assert inv.h_invariant(H).value == 2
    assert inv.is_equiv_gabidulin(H) is not None
    assert inv.is_equiv_twisted(H) is None


# -- Gabidulin index --------------------------------------------------------

def test_index_gabidulin(ctx25):
    G = fam.gabidulin(ctx25, 2, 1)
    res = inv.gabidulin_index(G)
    assert (res.lower, res.upper) == (2, 2)
    assert res.witness == G and res.status == "certified"


def test_index_twisted(ctx35):
    eta = fam.default_eta(ctx35, 3)
    H = fam.twisted(ctx35, 3, 1, eta)
    res = inv.gabidulin_index(H)
    assert (res.lower, res.upper) == (2, 2)
    # the explicit monomial subcode <x^[s], ..., x^[s(k-1)]>
    assert res.witness.k_fqn == 2


def test_index_witness_reverifies(fixture_codes):
    _, ctx, C1 = fixture_codes["C1"]
    res = inv.gabidulin_index(C1)
    assert (res.lower, res.upper) == (1, 1)
    D = res.witness
    assert D.k_fqn == 1
    assert D.basis[0].is_invertible()
    assert D.is_mrd().status == "verified_true"
    for f in D.basis:
        assert C1.contains(f)


def test_index_invariant_under_monomial_equivalence(ctx25, rng):
    G = fam.gabidulin(ctx25, 2, 1)
    g = random_poly(ctx25, rng, invertible=True)
    E = G.apply_equivalence(LP.monomial(ctx25, 3), g, sigma_exp=2)
    res = inv.gabidulin_index(E)
    assert (res.lower, res.upper) == (2, 2)


def test_index_rejects_fq_codes(ctx25):
    with pytest.raises(NotFqnLinear):
        inv.gabidulin_index(fam.gabidulin(ctx25, 2, 1).as_fq())


# -- reports, fixture rows, sampling ---------------------------------------

def test_table1_row_match(ctx25):
    row = inv.table1_row(fam.default_spec("G"))
    assert row["status"] == "match"
    assert row["h"] == 1 and row["R_exp"] == 5 and row["ind"] == [2, 2]


def test_table1_row_consistent():
    row = inv.table1_row(fam.default_spec("D1"))
    assert row["status"] == "consistent"
    lo, hi = row["ind"]
    assert lo <= row["expected"]["ind"] <= hi


def test_invariant_report_json(ctx25):
    rep = inv.invariant_report(fam.gabidulin(ctx25, 2, 1))
    obj = rep.to_json()
    assert obj["h"] == 1 and obj["ind"] == [2, 2]
    assert obj["L_exp"] == 5 and obj["R_exp"] == 5
    assert obj["min_distance_status"] == "exhaustive"


def test_fingerprint_agrees_for_equivalent_codes(ctx25, rng):
    G = fam.gabidulin(ctx25, 2, 1)
    g = random_poly(ctx25, rng, invertible=True)
    E = G.apply_equivalence(LP.monomial(ctx25, 1), g)
    f1 = inv.fingerprint(G)
    f2 = inv.fingerprint(E)
    assert f1["profile_exact"] and f2["profile_exact"]
    assert inv.fingerprints_agree(f1, f2)


def test_fingerprint_distinguishes(ctx25):
    G = fam.gabidulin(ctx25, 2, 1)
    spec = fam.default_spec("H")
    _, H = spec.build()
    assert not inv.fingerprints_agree(inv.fingerprint(G),
                                      inv.fingerprint(H))


def test_mrd_fraction_full_space():
    ctx = fam.context_for_q(2, 3)
    assert inv.mrd_fraction(ctx, 3, 5, seed=1) == 1.0


def test_mrd_fraction_deterministic(ctx24):
    a = inv.mrd_fraction(ctx24, 2, 30, seed=4)
    b = inv.mrd_fraction(ctx24, 2, 30, seed=4)
    assert a == b


def test_mrd_fraction_validates():
    ctx = fam.context_for_q(2, 3)
    with pytest.raises(ValueError):
        inv.mrd_fraction(ctx, 2, 0)


# -- equivalence invariance of the distinguishers ---------------------------

def test_invariants_stable_under_equivalence(ctx25, rng):
    eta_free = fam.gabidulin(ctx25, 2, 1)
    base_h = inv.h_invariant(eta_free).value
    base_L = inv.left_idealiser(eta_free).order_exponent
    base_R = inv.right_idealiser(eta_free).order_exponent
    base_d = eta_free.min_distance()
    for _ in range(5):
        g = random_poly(ctx25, rng, invertible=True)
        alpha = ctx25.random_element(rng, nonzero=True)
        t = int(rng.integers(0, ctx25.n))
        sig = int(rng.integers(0, ctx25.n))
        E = eta_free.apply_equivalence(LP.monomial(ctx25, t, alpha), g, sig)
        assert inv.h_invariant(E).value == base_h
        assert inv.left_idealiser(E).order_exponent == base_L
        assert inv.right_idealiser(E).order_exponent == base_R
        assert E.min_distance() == base_d

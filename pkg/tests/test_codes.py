import numpy as np
import pytest

from rankmetric.codes import FQ, FQN, RdCode, random_code
from rankmetric.errors import BudgetExceeded, ScalarModeMismatch
from rankmetric.linpoly import LinearizedPoly as LP, random_poly


def span(ctx, *idx):
    return RdCode.from_span_fqn([LP.monomial(ctx, i) for i in idx])


def test_canonical_basis_is_representation_independent(ctx25, rng):
    f = random_poly(ctx25, rng)
    g = random_poly(ctx25, rng)
    alpha = ctx25.random_element(rng, nonzero=True)
    A = RdCode.from_span_fqn([f, g])
    B = RdCode.from_span_fqn([g.scale(alpha), f + g])
    assert A == B


def test_contains(ctx25, rng):
    C = span(ctx25, 0, 1)
    alpha = ctx25.random_element(rng, nonzero=True)
    assert C.contains(LP.monomial(ctx25, 0, alpha) + LP.monomial(ctx25, 1))
    assert not C.contains(LP.monomial(ctx25, 2))


def test_dimension_formula(ctx25, rng):
    for _ in range(10):
        A = random_code(ctx25, 2, seed=int(rng.integers(1 << 30)))
        B = random_code(ctx25, 2, seed=int(rng.integers(1 << 30)))
        s = A.span_sum(B).k_fqn
        i = A.intersection(B).k_fqn
        assert s + i == A.k_fqn + B.k_fqn


def test_shift_properties(ctx25, rng):
    C = random_code(ctx25, 2, seed=11)
    assert C.shift(1).shift(4) == C
    assert C.shift(2) == C.shift(1).shift(1)
    # shifting preserves dimension and rank statistics
    assert C.shift(3).k_fqn == C.k_fqn
    assert C.shift(3).rank_distribution().counts == \
        C.rank_distribution().counts


def test_projective_count_and_cardinality(ctx24):
    G = span(ctx24, 0, 1)
    assert G.projective_count() == 17
    assert G.cardinality() == 16**2
    words = list(G.codewords(projective=True))
    assert len(words) == 17
    assert len({w.coeffs for w in words}) == 17


def test_min_distance_gabidulin(ctx24):
    assert span(ctx24, 0, 1).min_distance() == 3
    assert span(ctx24, 0).min_distance() == 4


def test_rank_distribution_totals(ctx24):
    G = span(ctx24, 0, 1)
    dist = G.rank_distribution()
    assert dist.total() == G.cardinality()
    assert dist.min_nonzero_rank() == 3
    assert dist.as_csv().startswith("rank,count\n0,1\n")


def test_budget_exceeded(ctx25):
    C = span(ctx25, 0, 1, 2)
    with pytest.raises(BudgetExceeded):
        C.rank_distribution(budget=10)


def test_is_mrd_statuses(ctx25, ctx24):
    G = span(ctx25, 0, 1)
    assert G.is_mrd().status == "verified_true"
    # over F_{2^4} the gap code <x, x^[2]> has words with a large kernel
    bad = span(ctx24, 0, 2)
    res = bad.is_mrd()
    assert res.status == "verified_false"
    assert res.witness is not None
    assert res.witness.rank() < ctx24.n - bad.k_fqn + 1
    assert bad.contains(res.witness)
    # sampled path
    res2 = G.is_mrd(budget=5, samples=500)
    assert res2.status == "sampled_consistent"
    assert res2.samples == 500


def test_sample_min_rank_upper_bounds_distance(ctx25, rng):
    C = random_code(ctx25, 2, seed=3)
    assert C.sample_min_rank(samples=3000, seed=1) >= C.min_distance()


def test_dual_involution_and_dims(ctx25, rng):
    for k in (1, 2, 3):
        C = random_code(ctx25, k, seed=k)
        D = C.dual()
        assert D.k_fqn == ctx25.n - k
        assert D.dual() == C
        for f in C.basis:
            for g in D.basis:
                assert f.bilinear_b(g).is_zero()


def test_fq_dual_matches_fqn_dual(ctx24, rng):
    C = random_code(ctx24, 2, seed=9)
    assert C.as_fq().dual() == C.dual().as_fq()


def test_fq_dual_dims(ctx24):
    C = random_code(ctx24, 5, scalars=FQ, seed=2)
    D = C.dual()
    assert D.dim_fq == ctx24.n**2 - 5
    assert D.dual() == C


def test_adjoint_code_involution_preserves_ranks(ctx25):
    C = span(ctx25, 0, 1)
    A = C.adjoint_code()
    assert A.adjoint_code() == C
    assert A.rank_distribution().counts == C.rank_distribution().counts


def test_apply_equivalence_preserves_rank_distribution(ctx25, rng):
    C = span(ctx25, 0, 1)
    g = random_poly(ctx25, rng, invertible=True)
    alpha = ctx25.random_element(rng, nonzero=True)
    h = LP.monomial(ctx25, 2, alpha)  # monomial h keeps left-linearity
    E = C.apply_equivalence(h, g, sigma_exp=1)
    assert E.scalars == FQN
    assert E.rank_distribution().counts == C.rank_distribution().counts


def test_apply_equivalence_general_h_drops_linearity(ctx25, rng):
    C = span(ctx25, 0, 1)
    h = random_poly(ctx25, rng, invertible=True)
    g = random_poly(ctx25, rng, invertible=True)
    E = C.apply_equivalence(h, g)
    assert E.dim_fq == C.dim_fq


def test_promotion(ctx25):
    C = span(ctx25, 0, 2)
    assert C.as_fq().try_promote() == C
    # a genuinely F_q-only space does not promote
    gens = [LP.monomial(ctx25, 0), LP.monomial(ctx25, 1)]
    D = RdCode.from_span_fq(gens)
    assert D.try_promote() is None


def test_scalar_mode_guards(ctx25):
    C = span(ctx25, 0)
    with pytest.raises(ScalarModeMismatch):
        C.intersection(C.as_fq())
    with pytest.raises(ScalarModeMismatch):
        C.as_fq().projective_count()


def test_json_roundtrip(ctx25):
    C = span(ctx25, 0, 3)
    obj = C.to_json()
    assert obj["scalars"] == "fqn"
    assert RdCode.from_json(obj, ctx25) == C
    D = C.as_fq()
    assert RdCode.from_json(D.to_json(), ctx25) == D


def test_random_code_dims_and_determinism(ctx25):
    A = random_code(ctx25, 3, seed=5)
    B = random_code(ctx25, 3, seed=5)
    assert A == B and A.k_fqn == 3
    F = random_code(ctx25, 7, scalars=FQ, seed=5)
    assert F.dim_fq == 7

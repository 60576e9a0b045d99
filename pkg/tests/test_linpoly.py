import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankmetric.errors import NotInvertible
from rankmetric.gf import build_context
from rankmetric.linalg import fq_rank
from rankmetric.linpoly import LinearizedPoly as LP, poly_from_images, \
    random_poly


def test_compose_is_evaluation(ctx34, rng):
    for _ in range(30):
        f = random_poly(ctx34, rng)
        g = random_poly(ctx34, rng)
        x = ctx34.random_element(rng)
        assert f.compose(g).evaluate(x) == f.evaluate(g.evaluate(x))


def test_compose_associative(ctx34, rng):
    f, g, h = (random_poly(ctx34, rng) for _ in range(3))
    assert f.compose(g).compose(h) == f.compose(g.compose(h))


def test_shift_is_qpower_of_values(ctx34, rng):
    # f^[s](v) = f(v)^(q^s)
    for s in range(1, ctx34.n):
        f = random_poly(ctx34, rng)
        v = ctx34.random_element(rng)
        assert f.frobenius_shift(s).evaluate(v) == f.evaluate(v).frobenius(s)


def test_shift_compose_identities(ctx34, rng):
    # (f o g)^[s] = f^[s] o g = f^sigma o g^[s], sigma the coefficient map
    for s in range(1, ctx34.n):
        f = random_poly(ctx34, rng)
        g = random_poly(ctx34, rng)
        lhs = f.compose(g).frobenius_shift(s)
        assert lhs == f.frobenius_shift(s).compose(g)
        sigma_exp = s * ctx34.e  # q^s as a power of p
        assert lhs == f.field_automorphism(sigma_exp).compose(
            g.frobenius_shift(s))


def test_shift_full_cycle(ctx34, rng):
    f = random_poly(ctx34, rng)
    assert f.frobenius_shift(ctx34.n) == f
    assert f.frobenius_shift(1).frobenius_shift(ctx34.n - 1) == f


def test_adjoint_involution(ctx34, rng):
    for _ in range(20):
        f = random_poly(ctx34, rng)
        assert f.adjoint().adjoint() == f


def test_adjoint_trace_identity(ctx35, rng):
    # Tr(y f(x)) = Tr(x f_hat(y))
    for _ in range(50):
        f = random_poly(ctx35, rng)
        x = ctx35.random_element(rng)
        y = ctx35.random_element(rng)
        assert (y * f.evaluate(x)).trace() == \
            (x * f.adjoint().evaluate(y)).trace()


def test_adjoint_antihomomorphism(ctx34, rng):
    f, g = random_poly(ctx34, rng), random_poly(ctx34, rng)
    assert f.compose(g).adjoint() == g.adjoint().compose(f.adjoint())


def test_matrix_is_homomorphism(ctx34, rng):
    from rankmetric.linalg import fq_matmul
    for _ in range(20):
        f = random_poly(ctx34, rng)
        g = random_poly(ctx34, rng)
        M = fq_matmul(ctx34, f.matrix(), g.matrix())
        assert (M == f.compose(g).matrix()).all()


def test_rank_matches_matrix_rank(ctx34, rng):
    f = random_poly(ctx34, rng)
    assert f.rank() == fq_rank(ctx34, f.matrix())
    assert f.rank() + f.kernel_dim() == ctx34.n


def test_monomial_rank(ctx34):
    assert LP.monomial(ctx34, 2).rank() == ctx34.n
    assert LP.zero(ctx34).rank() == 0


def test_inverse_roundtrip(ctx34, rng):
    ident = LP.identity(ctx34)
    for _ in range(10):
        f = random_poly(ctx34, rng, invertible=True)
        finv = f.inverse()
        assert f.compose(finv) == ident
        assert finv.compose(f) == ident


def test_inverse_rejects_singular(ctx34):
    # x^q - x kills F_q, rank < n
    f = LP.monomial(ctx34, 1) - LP.monomial(ctx34, 0)
    with pytest.raises(NotInvertible):
        f.inverse()


def test_poly_from_images_interpolates(ctx34, rng):
    f = random_poly(ctx34, rng)
    images = [f.evaluate(b) for b in ctx34.fq_basis]
    assert poly_from_images(ctx34, images) == f


def test_bilinear_form_symmetric_fq_valued(ctx34, rng):
    f, g = random_poly(ctx34, rng), random_poly(ctx34, rng)
    v = f.bilinear_b(g)
    assert v == g.bilinear_b(f)
    assert v.is_in_subfield()


def test_bilinear_nondegenerate(ctx34):
    # only the zero polynomial pairs to zero with every monomial basis map
    n = ctx34.n
    for i in range(n):
        for theta in ctx34.fq_basis:
            probe = LP.monomial(ctx34, i, theta)
            if all(probe.bilinear_b(LP.monomial(ctx34, j, t)).is_zero()
                   for j in range(n) for t in ctx34.fq_basis):
                assert probe.is_zero()


def test_scale_is_left_scalar_composition(ctx34, rng):
    f = random_poly(ctx34, rng)
    alpha = ctx34.random_element(rng, nonzero=True)
    assert f.scale(alpha) == LP.scalar_map(ctx34, alpha).compose(f)


def test_json_roundtrip(ctx34, rng):
    f = random_poly(ctx34, rng)
    assert LP.from_json(ctx34, f.to_json()) == f


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3**4 - 1), st.integers(0, 3**4 - 1),
       st.integers(1, 3))
def test_property_shift_additive(a_int, b_int, s):
    ctx = build_context(3, 1, 4)
    rng = np.random.default_rng(a_int * 100 + b_int)
    f = random_poly(ctx, rng)
    g = random_poly(ctx, rng)
    assert (f + g).frobenius_shift(s) == \
        f.frobenius_shift(s) + g.frobenius_shift(s)

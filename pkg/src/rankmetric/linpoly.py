"""The algebra of q-polynomials f(x) = sum a_i x^(q^i) over F_{q^n}.

A q-polynomial is stored as a dense length-n vector of coefficients of
x^(q^i), i = 0..n-1, and doubles as the F_q-linear map it induces on
F_{q^n}.  Composition, Frobenius shift, the trace-form adjoint and the
bilinear form b(f, g) = Tr(sum f_i g_i) are all coefficient-level
operations; rank and inverse go through the n x n matrix of the map over
F_q.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import ContextMismatch, NotInvertible
from .gf import FieldContext, FieldElement


class LinearizedPoly:
    """f(x) = sum_{i=0}^{n-1} coeffs[i] * x^(q^i)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs):
        self.ctx = ctx
        codes = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.ctx is not ctx:
                    raise ContextMismatch("coefficient from another context")
                codes.append(c.code)
            else:
                codes.append(int(c))
        if len(codes) != ctx.n:
            raise ValueError(f"expected {ctx.n} coefficients, got {len(codes)}")
        self.coeffs = tuple(codes)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [ctx.ZERO] * ctx.n)

    @classmethod
    def identity(cls, ctx):
        return cls.monomial(ctx, 0)

    @classmethod
    def monomial(cls, ctx, i, coeff=None):
        """coeff * x^(q^i); coeff defaults to one."""
        codes = [ctx.ZERO] * ctx.n
        codes[i % ctx.n] = 0 if coeff is None else _code(ctx, coeff)
        return cls(ctx, codes)

    @classmethod
    def scalar_map(cls, ctx, alpha):
        """tau_alpha = alpha * x."""
        return cls.monomial(ctx, 0, alpha)

    # -- vector space structure -------------------------------------------

    def _check(self, other):
        if not isinstance(other, LinearizedPoly):
            raise TypeError("LinearizedPoly expected")
        if other.ctx is not self.ctx:
            raise ContextMismatch("polynomials from different contexts")

    def __add__(self, other):
        self._check(other)
        ctx = self.ctx
        return LinearizedPoly(
            ctx, [ctx.add_c(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        ctx = self.ctx
        return LinearizedPoly(
            ctx, [ctx.sub_c(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        ctx = self.ctx
        return LinearizedPoly(ctx, [ctx.neg_c(a) for a in self.coeffs])

    def scale(self, alpha):
        """alpha * f (left composition with the scalar map tau_alpha)."""
        ctx = self.ctx
        a = _code(ctx, alpha)
        return LinearizedPoly(ctx, [ctx.mul_c(a, c) for c in self.coeffs])

    def is_zero(self):
        return all(c == self.ctx.ZERO for c in self.coeffs)

    # -- the induced map ---------------------------------------------------

    def evaluate(self, x):
        """f(x) = sum a_i x^(q^i)."""
        ctx = self.ctx
        xc = _code(ctx, x)
        acc = ctx.ZERO
        for i, a in enumerate(self.coeffs):
            if a != ctx.ZERO:
                acc = ctx.add_c(acc, ctx.mul_c(a, ctx.frob_c(xc, i)))
        return FieldElement(ctx, acc)

    def compose(self, other):
        """f o g with (f o g)(v) = f(g(v))."""
        self._check(other)
        ctx, n = self.ctx, self.ctx.n
        out = [ctx.ZERO] * n
        for i, fi in enumerate(self.coeffs):
            if fi == ctx.ZERO:
                continue
            for j, gj in enumerate(other.coeffs):
                if gj == ctx.ZERO:
                    continue
                k = (i + j) % n
                out[k] = ctx.add_c(out[k],
                                   ctx.mul_c(fi, ctx.frob_c(gj, i)))
        return LinearizedPoly(ctx, out)

    def frobenius_shift(self, s):
        """f^[s], the reduction of f(x)^(q^s) mod x^(q^n) - x."""
        ctx, n = self.ctx, self.ctx.n
        s %= n
        out = [ctx.ZERO] * n
        for i, a in enumerate(self.coeffs):
            out[(i + s) % n] = ctx.frob_c(a, s)
        return LinearizedPoly(ctx, out)

    def field_automorphism(self, sigma_exp):
        """Apply a -> a^(p^sigma_exp) to every coefficient."""
        ctx = self.ctx
        t = pow(ctx.p, sigma_exp % (ctx.e * ctx.n), ctx.size - 1) \
            if ctx.size > 2 else 1
        out = [ctx.ZERO if a == ctx.ZERO else (a * t) % (ctx.size - 1)
               for a in self.coeffs]
        return LinearizedPoly(ctx, out)

    def adjoint(self):
        """The adjoint w.r.t. b: coefficient j is a_{(n-j) mod n}^(q^j)."""
        ctx, n = self.ctx, self.ctx.n
        out = [ctx.frob_c(self.coeffs[(n - j) % n], j) for j in range(n)]
        return LinearizedPoly(ctx, out)

    # -- rank and inversion ------------------------------------------------

    def matrix(self):
        """n x n matrix over F_q: column j is fq_coordinates(f(basis_j))."""
        ctx, n = self.ctx, self.ctx.n
        M = np.zeros((n, n), dtype=np.uint8)
        for j, bc in enumerate(ctx.fq_basis_codes):
            img = self.evaluate(FieldElement(ctx, bc))
            M[:, j] = ctx.coords_c(img.code)
        return M

    def rank(self):
        return linalg.fq_rank(self.ctx, self.matrix())

    def kernel_dim(self):
        return self.ctx.n - self.rank()

    def is_invertible(self):
        return self.rank() == self.ctx.n

    def inverse(self):
        """Compositional inverse, via matrix inversion plus interpolation."""
        ctx = self.ctx
        Minv = linalg.fq_inv_matrix(ctx, self.matrix())
        if Minv is None:
            raise NotInvertible("polynomial has rank < n")
        images = [FieldElement(ctx, ctx.from_coords_idx(Minv[:, j]))
                  for j in range(ctx.n)]
        return poly_from_images(ctx, images)

    # -- bilinear form -----------------------------------------------------

    def bilinear_b(self, other):
        """b(f, g) = Tr_{q^n/q}(sum f_i g_i), an element of F_q."""
        self._check(other)
        ctx = self.ctx
        acc = ctx.ZERO
        for a, b in zip(self.coeffs, other.coeffs):
            acc = ctx.add_c(acc, ctx.mul_c(a, b))
        return FieldElement(ctx, ctx.trace_c(acc))

    # -- conversions -------------------------------------------------------

    def coeff_vector(self):
        """Coefficients as a numpy array of element codes."""
        return np.array(self.coeffs, dtype=np.int64)

    def coefficients(self):
        return [FieldElement(self.ctx, c) for c in self.coeffs]

    def fq_vector(self):
        """Flattened n^2 F_q-coordinate vector (uint8 indices)."""
        return self.ctx.v_coords(self.coeff_vector()).reshape(-1)

    @classmethod
    def from_coeff_vector(cls, ctx, vec):
        return cls(ctx, [int(c) for c in vec])

    @classmethod
    def from_fq_vector(cls, ctx, vec):
        n = ctx.n
        vec = np.asarray(vec, dtype=np.uint8).reshape(n, n)
        return cls(ctx, [ctx.from_coords_idx(vec[i]) for i in range(n)])

    def to_json(self):
        return ["".join(str(d) for d in self.ctx.poly_digits(c))
                for c in self.coeffs]

    @classmethod
    def from_json(cls, ctx, obj):
        return cls(ctx, [ctx.element_from_string(s).code for s in obj])

    def __eq__(self, other):
        if not isinstance(other, LinearizedPoly):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c != self.ctx.ZERO:
                coeff = self.ctx.element(c)
                terms.append(f"{coeff!r}*x^[{i}]")
        return " + ".join(terms) if terms else "0"


def _code(ctx, x):
    if isinstance(x, FieldElement):
        if x.ctx is not ctx:
            raise ContextMismatch("element from another context")
        return x.code
    return int(x)


def poly_from_images(ctx, images):
    """The unique q-polynomial with f(basis_j) = images[j].

    Solves the Moore system sum_i a_i b_j^(q^i) = y_j over F_{q^n}.
    """
    n = ctx.n
    A = np.full((n, n), ctx.ZERO, dtype=np.int64)
    b = np.full(n, ctx.ZERO, dtype=np.int64)
    for j, bc in enumerate(ctx.fq_basis_codes):
        for i in range(n):
            A[j, i] = ctx.frob_c(bc, i)
        b[j] = _code(ctx, images[j])
    x = linalg.codes_solve(ctx, A, b)
    if x is None:
        raise AssertionError("Moore matrix of a basis must be invertible")
    return LinearizedPoly.from_coeff_vector(ctx, x)


def random_poly(ctx, rng, invertible=False):
    """Uniform random q-polynomial; rejection-sample if invertible."""
    while True:
        codes = rng.integers(-1, ctx.size - 1, size=ctx.n)
        f = LinearizedPoly(
            ctx, [int(c) if c >= 0 else ctx.ZERO for c in codes])
        if not invertible or f.is_invertible():
            return f

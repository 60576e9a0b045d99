"""Finite field towers F_p <= F_q = F_{p^e} <= F_{q^n}.

Elements live in the big field F_{q^n} and are stored as discrete logs with
respect to a fixed primitive element (Zech-logarithm arithmetic).  The
subfield F_q is realized as the fixed field of the map a -> a^q, not as a
separate type.  A polynomial-basis representation is kept around for
serialization and as an independent cross-check oracle for the tables.

Internally an element is a "code": an integer in [0, N-1] where N = q^n.
Codes 0..N-2 are discrete logs of nonzero elements, code N-1 is zero.
"""

from __future__ import annotations

import functools

import numpy as np
import sympy

from .errors import (
    ContextMismatch,
    DivisionByZero,
    NonPrime,
    TableCapExceeded,
)

DEFAULT_CAP = 2**24


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p, coefficient lists low-degree-first
# ---------------------------------------------------------------------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * fi) % p
        a.pop()
    return _ptrim(a)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, exp, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while exp:
        if exp & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        exp >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # reduce a mod b (b made monic on the fly)
        inv_lead = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
        bm = [(c * inv_lead) % p for c in b]
        a = _pmod(a, bm, p)
        a, b = b, a
    return a


def _is_irreducible(f, p):
    """Rabin test for a monic polynomial f over F_p."""
    m = len(f) - 1
    x = [0, 1]
    xpm = _ppowmod(x, p**m, f, p)
    if _ptrim([(c1 - c2) % p for c1, c2 in
               zip(xpm + [0] * 3, x + [0] * len(xpm))]):
        return False
    for ell in sympy.primefactors(m):
        d = m // ell
        xpd = _ppowmod(x, p**d, f, p)
        diff = [(c1 - c2) % p for c1, c2 in
                zip(xpd + [0] * 3, x + [0] * len(xpd))]
        g = _pgcd(f, _ptrim(diff), p)
        if len(g) != 1:
            return False
    return True


def _smallest_irreducible(p, m):
    """Monic irreducible of degree m, coefficients compared low-degree-first."""
    if m == 1:
        return (0, 1)  # x itself
    # odometer over (c_0, ..., c_{m-1}), c_0 the most significant key;
    # c_0 = 0 would make the polynomial divisible by x
    digits = [0] * m
    digits[0] = 1
    while True:
        f = digits + [1]
        if _is_irreducible(f, p):
            return tuple(f)
        i = m - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] < p:
                break
            digits[i] = 0
            i -= 1
        if i < 0:
            raise AssertionError("no irreducible of degree %d over F_%d" % (m, p))


# ---------------------------------------------------------------------------
# FieldContext
# ---------------------------------------------------------------------------

class FieldContext:
    """Immutable arithmetic context for the tower F_p <= F_{p^e} <= F_{q^n}.

    Deterministic for given (p, e, n): the modulus is the lexicographically
    smallest monic irreducible of degree e*n (coefficients compared
    low-degree-first) and the generator is the primitive element with the
    smallest integer representation.
    """

    def __init__(self, p, e, n, cap=DEFAULT_CAP):
        if not sympy.isprime(p):
            raise NonPrime(f"p = {p} is not prime")
        if e < 1 or n < 1:
            raise ValueError("e and n must be positive")
        m = e * n
        size = p**m
        if size > cap:
            raise TableCapExceeded(f"p^(e*n) = {size} exceeds cap {cap}")
        self.p = p
        self.e = e
        self.n = n
        self.total_degree = m
        self.q = p**e
        self.size = size
        self.ZERO = size - 1  # code of the zero element
        self.modulus = _smallest_irreducible(p, m)
        self._build_tables()
        self._build_subfield()
        self._build_basis_and_coords()

    # -- construction ------------------------------------------------------

    def _mult_matrix(self, digits):
        """(m x m) matrix of multiplication by the element with these digits."""
        p, m, f = self.p, self.total_degree, list(self.modulus)
        cols = []
        cur = _ptrim(list(digits))
        for _ in range(m):
            cols.append(cur + [0] * (m - len(cur)))
            cur = _pmod([0] + cur, f, p)
        return np.array(cols, dtype=np.int64).T % p

    def _digits_of_int(self, v):
        p, m = self.p, self.total_degree
        out = []
        for _ in range(m):
            v, r = divmod(v, p)
            out.append(r)
        return out

    @staticmethod
    def _int_of_digits(digits, p):
        v = 0
        for d in reversed(digits):
            v = v * p + d
        return v

    def _element_order_is_max(self, digits, factors):
        p, f = self.p, list(self.modulus)
        group = self.size - 1
        for ell in factors:
            r = _ppowmod(list(digits), group // ell, f, p)
            if r == [1]:
                return False
        return True

    def _build_tables(self):
        p, m, N = self.p, self.total_degree, self.size
        factors = sympy.primefactors(N - 1) if N > 2 else []
        gen_digits = None
        for v in range(2, N):
            digits = _ptrim(self._digits_of_int(v))
            if N == 2 or self._element_order_is_max(digits, factors):
                gen_digits = digits
                break
        if gen_digits is None:  # N == 2: the only nonzero element is 1
            gen_digits = [1]
        self._gen_int = self._int_of_digits(gen_digits, p)

        # exp table of integer representations, built by repeated
        # multiplication with the generator's multiplication matrix
        M = self._mult_matrix(gen_digits)
        ppow = p ** np.arange(m, dtype=np.int64)
        exp = np.empty(N - 1, dtype=np.int64)
        cur = np.zeros(m, dtype=np.int64)
        cur[0] = 1
        for k in range(N - 1):
            exp[k] = int(cur @ ppow)
            cur = (M @ cur) % p
        self._exp = exp
        log = np.full(N, self.ZERO, dtype=np.int64)
        log[exp] = np.arange(N - 1)
        self._log = log

        # Zech table: zech[d] = log(1 + g^d), ZERO where 1 + g^d = 0
        plus_one = exp - exp % p + (exp + 1) % p
        self._zech = np.where(plus_one == 0, self.ZERO, log[plus_one])

        # code of -1 (used for negation)
        if p == 2:
            self._neg1 = 0  # log of 1
        else:
            self._neg1 = (N - 1) // 2

        # q^j mod (N-1) for frobenius powers
        self._qpow = [pow(self.q, j, N - 1) for j in range(self.n)] \
            if N > 2 else [1] * self.n

    def _build_subfield(self):
        N, q = self.size, self.q
        if q == N:
            sub_codes = list(range(N - 1))
        else:
            t = (N - 1) // (q - 1)
            sub_codes = [(t * i) % (N - 1) for i in range(q - 1)]
        codes = [self.ZERO] + sub_codes
        # order subfield elements by integer representation: 0, 1, g^t, ...
        codes.sort(key=lambda c: 0 if c == self.ZERO else int(self._exp[c]))
        self.fq_codes = codes  # position 0 is zero, position 1 is one
        self._fq_index = {c: i for i, c in enumerate(codes)}
        # small-field operation tables used by the rank kernels
        add = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for i, a in enumerate(codes):
            for j, b in enumerate(codes):
                add[i, j] = self._fq_index[self.add_c(a, b)]
                mul[i, j] = self._fq_index[self.mul_c(a, b)]
            if a != self.ZERO:
                inv[i] = self._fq_index[self.inv_c(a)]
        self.fq_add = add
        self.fq_mul = mul
        self.fq_inv = inv
        neg = np.zeros(q, dtype=np.uint8)
        for i, a in enumerate(codes):
            neg[i] = self._fq_index[self.neg_c(a)]
        self.fq_neg = neg

    def _build_basis_and_coords(self):
        """Greedy F_q-basis scan and the full coordinate lookup table."""
        n, N = self.n, self.size
        basis = []
        span_codes = np.array([self.ZERO], dtype=np.int64)
        span_coords = np.zeros((1, n), dtype=np.uint8)
        in_span = np.zeros(N, dtype=bool)
        in_span[self.ZERO] = True
        # scan 1 = g^0, g^1, g^2, ... in generator-power order
        for k in range(N - 1):
            if in_span[k]:
                continue
            j = len(basis)
            basis.append(k)
            chunks_v = [span_codes]
            chunks_c = [span_coords]
            for ci in range(1, self.q):
                prod = self.mul_c(self.fq_codes[ci], k)
                nv = self.v_add(span_codes, np.full_like(span_codes, prod))
                nc = span_coords.copy()
                nc[:, j] = ci
                chunks_v.append(nv)
                chunks_c.append(nc)
            span_codes = np.concatenate(chunks_v)
            span_coords = np.concatenate(chunks_c)
            in_span[span_codes] = True
            if len(basis) == n:
                break
        assert len(basis) == n and len(span_codes) == N
        self.fq_basis_codes = basis
        coords = np.zeros((N, n), dtype=np.uint8)
        coords[span_codes] = span_coords
        self._coords = coords

    # -- scalar code arithmetic -------------------------------------------

    def mul_c(self, a, b):
        if a == self.ZERO or b == self.ZERO:
            return self.ZERO
        return (a + b) % (self.size - 1)

    def add_c(self, a, b):
        if a == self.ZERO:
            return b
        if b == self.ZERO:
            return a
        d = (b - a) % (self.size - 1)
        z = self._zech[d]
        if z == self.ZERO:
            return self.ZERO
        return (a + z) % (self.size - 1)

    def neg_c(self, a):
        if a == self.ZERO:
            return a
        return self.mul_c(a, self._neg1)

    def sub_c(self, a, b):
        return self.add_c(a, self.neg_c(b))

    def inv_c(self, a):
        if a == self.ZERO:
            raise DivisionByZero("inverse of zero")
        return (-a) % (self.size - 1)

    def pow_c(self, a, k):
        if a == self.ZERO:
            if k == 0:
                return 0  # 0^0 = 1 by convention, log 0
            if k < 0:
                raise DivisionByZero("negative power of zero")
            return self.ZERO
        return (a * k) % (self.size - 1)

    def frob_c(self, a, j=1):
        """a -> a^(q^j)."""
        if a == self.ZERO:
            return a
        return (a * self._qpow[j % self.n]) % (self.size - 1)

    def trace_c(self, a):
        acc = self.ZERO
        for j in range(self.n):
            acc = self.add_c(acc, self.frob_c(a, j))
        return acc

    def norm_c(self, a):
        if a == self.ZERO:
            return self.ZERO
        if self.size == self.q:
            return a
        t = (self.size - 1) // (self.q - 1)
        return (a * t) % (self.size - 1)

    def in_subfield_c(self, a):
        return self.frob_c(a, 1) == a

    def coords_c(self, a):
        """F_q-coordinates of a w.r.t. fq_basis, as indices into fq_codes."""
        return self._coords[a]

    def from_coords_idx(self, idx):
        """Inverse of coords_c: combine basis with F_q coefficient indices."""
        acc = self.ZERO
        for j, ci in enumerate(idx):
            if ci:
                acc = self.add_c(acc, self.mul_c(self.fq_codes[ci],
                                                 self.fq_basis_codes[j]))
        return acc

    # -- vectorized code arithmetic (numpy int64 arrays of codes) ---------

    def v_mul(self, A, B):
        zero = (A == self.ZERO) | (B == self.ZERO)
        out = (A + B) % (self.size - 1)
        out[zero] = self.ZERO
        return out

    def v_add(self, A, B):
        az = A == self.ZERO
        bz = B == self.ZERO
        d = (B - A) % (self.size - 1)
        z = self._zech[np.where(az | bz, 0, d)]
        out = (A + z) % (self.size - 1)
        out[z == self.ZERO] = self.ZERO
        out[az] = B[az] if isinstance(B, np.ndarray) else B
        out[bz] = A[bz]
        return out

    def v_scalar_mul(self, c, A):
        if c == self.ZERO:
            return np.full_like(A, self.ZERO)
        out = (A + c) % (self.size - 1)
        out[A == self.ZERO] = self.ZERO
        return out

    def v_frob(self, A, j=1):
        out = (A * self._qpow[j % self.n]) % (self.size - 1)
        out[A == self.ZERO] = self.ZERO
        return out

    def v_coords(self, A):
        return self._coords[A]

    # -- polynomial-basis oracle ------------------------------------------

    def poly_digits(self, a):
        """Low-first F_p digit list of the element with code a."""
        if a == self.ZERO:
            return [0] * self.total_degree
        v = int(self._exp[a])
        return self._digits_of_int(v)

    def code_of_digits(self, digits):
        v = self._int_of_digits(list(digits), self.p)
        if v == 0:
            return self.ZERO
        if v >= self.size:
            raise ValueError("digit vector out of range")
        return int(self._log[v])

    def poly_add_oracle(self, a, b):
        """Addition computed in the polynomial basis (cross-check path)."""
        da, db = self.poly_digits(a), self.poly_digits(b)
        return self.code_of_digits([(x + y) % self.p for x, y in zip(da, db)])

    def poly_mul_oracle(self, a, b):
        if a == self.ZERO or b == self.ZERO:
            return self.ZERO
        prod = _pmulmod(_ptrim(self.poly_digits(a)),
                        _ptrim(self.poly_digits(b)),
                        list(self.modulus), self.p)
        prod = prod + [0] * (self.total_degree - len(prod))
        return self.code_of_digits(prod)

    # -- public element API -----------------------------------------------

    def element(self, code):
        return FieldElement(self, code)

    @property
    def zero(self):
        return FieldElement(self, self.ZERO)

    @property
    def one(self):
        return FieldElement(self, 0)

    @property
    def generator(self):
        return FieldElement(self, 1 if self.size > 2 else 0)

    def gen_power(self, k):
        if self.size == 2:
            return self.one
        return FieldElement(self, k % (self.size - 1))

    @property
    def fq_elements(self):
        return [FieldElement(self, c) for c in self.fq_codes]

    @property
    def fq_basis(self):
        return [FieldElement(self, c) for c in self.fq_basis_codes]

    def element_from_string(self, s):
        """Parse the base-p little-endian digit-string serialization."""
        if len(s) != self.total_degree:
            raise ValueError(
                f"expected {self.total_degree} digits, got {len(s)}")
        return FieldElement(self, self.code_of_digits([int(ch) for ch in s]))

    def random_element(self, rng, nonzero=False):
        lo = 0 if nonzero else -1
        c = int(rng.integers(lo, self.size - 1))
        return FieldElement(self, c if c >= 0 else self.ZERO)

    def random_elements(self, rng, count, nonzero=False):
        lo = 0 if nonzero else -1
        codes = rng.integers(lo, self.size - 1, size=count)
        return [FieldElement(self, int(c) if c >= 0 else self.ZERO)
                for c in codes]

    def to_json(self):
        return {"p": self.p, "e": self.e, "n": self.n,
                "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj):
        ctx = build_context(obj["p"], obj["e"], obj["n"])
        if list(ctx.modulus) != list(obj["modulus"]):
            raise ValueError("modulus mismatch: context is not canonical")
        return ctx

    def __repr__(self):
        return f"FieldContext(p={self.p}, e={self.e}, n={self.n})"


class FieldElement:
    """One element of F_{q^n}, tied to its owning FieldContext."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = code

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other)!r}")
        if other.ctx is not self.ctx:
            raise ContextMismatch("elements belong to different contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.ctx, self.ctx.add_c(self.code, other.code))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.ctx, self.ctx.sub_c(self.code, other.code))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.ctx, self.ctx.mul_c(self.code, other.code))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElement(self.ctx,
                            self.ctx.mul_c(self.code,
                                           self.ctx.inv_c(other.code)))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg_c(self.code))

    def __pow__(self, k):
        return FieldElement(self.ctx, self.ctx.pow_c(self.code, k))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv_c(self.code))

    def frobenius(self, j=1):
        """Image under a -> a^(q^j)."""
        return FieldElement(self.ctx, self.ctx.frob_c(self.code, j))

    def trace(self):
        """Relative trace onto F_q."""
        return FieldElement(self.ctx, self.ctx.trace_c(self.code))

    def norm(self):
        """Relative norm onto F_q (norm of zero is zero)."""
        return FieldElement(self.ctx, self.ctx.norm_c(self.code))

    def is_zero(self):
        return self.code == self.ctx.ZERO

    def is_in_subfield(self):
        return self.ctx.in_subfield_c(self.code)

    def fq_coordinates(self):
        """Coordinates over fq_basis as a list of F_q FieldElements."""
        idx = self.ctx.coords_c(self.code)
        return [FieldElement(self.ctx, self.ctx.fq_codes[i]) for i in idx]

    def to_string(self):
        return "".join(str(d) for d in self.ctx.poly_digits(self.code))

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx is other.ctx and self.code == other.code

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __repr__(self):
        return f"<{self.to_string()}>"


@functools.lru_cache(maxsize=None)
def _cached_context(p, e, n, cap):
    return FieldContext(p, e, n, cap)


def build_context(p, e, n, cap=DEFAULT_CAP):
    """Deterministic context for the tower F_p <= F_{p^e} <= F_{p^{e*n}}."""
    return _cached_context(p, e, n, cap)

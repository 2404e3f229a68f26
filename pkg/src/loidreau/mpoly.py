"""Polynomials over F_{2^m}: sparse multivariate and dense univariate.

:class:`MPoly` maps exponent tuples to nonzero coefficients and orders terms
graded-lexicographically.  Dense univariate polynomials are ``uint64``
arrays of coefficients, lowest degree first; the ``u_*`` helpers operate on
those and carry the heavy lifting (resultants, gcds, root finding).
"""

from __future__ import annotations

import numpy as np

from .gf import Field
from .linalg import batched_det


class DivisionError(ArithmeticError):
    """Exact division was requested but the remainder is nonzero."""


def _grlex(exp):
    return (sum(exp), exp)


class MPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, F: Field, nvars: int, terms=None):
        self.field = F
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong arity for {nvars} variables")
                c = int(c)
                if c:
                    self.terms[e] = c

    @classmethod
    def constant(cls, F: Field, nvars: int, c: int = 1) -> "MPoly":
        return cls(F, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, F: Field, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(F, nvars, {tuple(e): 1})

    @classmethod
    def gens(cls, F: Field, nvars: int) -> list["MPoly"]:
        return [cls.variable(F, nvars, i) for i in range(nvars)]

    @classmethod
    def from_dense(cls, F: Field, coeffs, nvars: int = 1, var: int = 0) -> "MPoly":
        terms = {}
        for d, c in enumerate(np.asarray(coeffs).tolist()):
            if c:
                e = [0] * nvars
                e[var] = d
                terms[tuple(e)] = c
        return cls(F, nvars, terms)

    def _new(self, terms) -> "MPoly":
        p = MPoly.__new__(MPoly)
        p.field, p.nvars, p.terms = self.field, self.nvars, terms
        return p

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def sorted_terms(self) -> list:
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def leading_term(self):
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def __eq__(self, other):
        if isinstance(other, int):
            other = MPoly.constant(self.field, self.nvars, other)
        return (isinstance(other, MPoly) and self.nvars == other.nvars
                and self.field == other.field and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        names = "XYZW" if self.nvars <= 4 else None
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if names else f"x{i}") + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e) if k)
            if c == 1 and mono:
                parts.append(mono)
            else:
                parts.append(f"0x{c:x}" + ("*" + mono if mono else ""))
        return "MPoly(" + " + ".join(parts) + ")"

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        return MPoly.constant(self.field, self.nvars, int(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) ^ c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._new(terms)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        F = self.field
        if not isinstance(other, MPoly):
            c = int(other)
            if c == 0:
                return self._new({})
            return self._new({e: F.mul(v, c) for e, v in self.terms.items()})
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) ^ F.mul(c1, c2)
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return self._new(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, u: int) -> "MPoly":
        return frobenius_poly(self, u)

    # -- evaluation ------------------------------------------------------

    def __call__(self, *point):
        return mp_eval(self, point)

    def eval_many(self, points) -> np.ndarray:
        """Evaluate at each row of ``points`` (shape (N, nvars))."""
        F = self.field
        pts = np.asarray(points, dtype=np.uint64).reshape(-1, self.nvars)
        acc = np.zeros(pts.shape[0], dtype=np.uint64)
        cache = {}
        for e, c in self.terms.items():
            val = np.full(pts.shape[0], c, dtype=np.uint64)
            for v, k in enumerate(e):
                if k:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = F.pow(pts[:, v], k)
                    val = F.mul(val, cache[key])
            acc ^= val
        return acc

    def dense(self, var: int = 0) -> np.ndarray:
        """Dense coefficient array in ``var``; all other exponents must be 0."""
        out = np.zeros(max(self.degree(var), -1) + 1, dtype=np.uint64)
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i != var):
                raise ValueError("polynomial is not univariate in the requested variable")
            out[e[var]] = c
        return out

    def coeffs_in(self, var: int) -> list[np.ndarray]:
        """For a bivariate polynomial: list over powers of ``var`` of dense
        coefficient arrays in the other variable."""
        if self.nvars != 2:
            raise ValueError("coeffs_in needs exactly two variables")
        other = 1 - var
        dv = self.degree(var)
        do = max(self.degree(other), 0)
        out = [np.zeros(do + 1, dtype=np.uint64) for _ in range(dv + 1)]
        for e, c in self.terms.items():
            out[e[var]][e[other]] = c
        return [u_trim(a) for a in out]


# ---------------------------------------------------------------------------
# module-level operations


def mp_add(p: MPoly, q: MPoly) -> MPoly:
    return p + q


def mp_mul(p: MPoly, q: MPoly) -> MPoly:
    return p * q


def mp_eval(p: MPoly, point):
    """Substitute ``point``; entries equal to None stay symbolic.

    Returns a field element when every variable is substituted, otherwise
    an MPoly of the same arity.
    """
    F = p.field
    point = list(point)
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    full = all(v is not None for v in point)
    terms: dict = {}
    acc = 0
    for e, c in p.terms.items():
        val = c
        keep = list(e)
        for i, k in enumerate(e):
            if k and point[i] is not None:
                val = F.mul(val, F.pow(int(point[i]), k))
                keep[i] = 0
        if full:
            acc ^= val
        else:
            key = tuple(keep)
            v = terms.get(key, 0) ^ val
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
    return acc if full else MPoly(F, p.nvars, terms)


def mp_exact_div(num: MPoly, den: MPoly) -> MPoly:
    """num / den, raising DivisionError if den does not divide num."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    F = num.field
    de, dc = den.leading_term()
    dinv = F.inv(dc)
    rem = dict(num.terms)
    quo: dict = {}
    den_terms = list(den.terms.items())
    while rem:
        e = max(rem, key=_grlex)
        if any(a < b for a, b in zip(e, de)):
            raise DivisionError("inexact multivariate division")
        qe = tuple(a - b for a, b in zip(e, de))
        qc = F.mul(rem[e], dinv)
        quo[qe] = qc
        for te, tc in den_terms:
            key = tuple(a + b for a, b in zip(te, qe))
            v = rem.get(key, 0) ^ F.mul(tc, qc)
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return MPoly(F, num.nvars, quo)


def frobenius_poly(p: MPoly, u: int) -> MPoly:
    """p^(2^u): coefficients raised to 2^u, exponents multiplied by 2^u."""
    if u < 0:
        raise ValueError("frobenius_poly is only a polynomial map for u >= 0")
    F = p.field
    s = 1 << u
    return MPoly(F, p.nvars, {tuple(k * s for k in e): F.frobenius(c, u)
                              for e, c in p.terms.items()})


# ---------------------------------------------------------------------------
# dense univariate helpers


def u_trim(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def u_deg(a) -> int:
    nz = np.flatnonzero(a)
    return int(nz[-1]) if nz.size else -1


def u_add(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64)
    if a.size < b.size:
        a, b = b, a
    out = a.copy()
    out[: b.size] ^= b
    return u_trim(out)


def u_mul(F: Field, a, b) -> np.ndarray:
    a, b = u_trim(a), u_trim(b)
    if a.size == 0 or b.size == 0:
        return a[:0]
    prod = F.mul(a[:, None], b[None, :])
    rows = np.arange(a.size)[:, None]
    cols = rows + np.arange(b.size)[None, :]
    Z = np.zeros((a.size, a.size + b.size - 1), dtype=np.uint64)
    Z[rows, cols] = prod
    return u_trim(np.bitwise_xor.reduce(Z, axis=0))


def u_divmod(F: Field, a, b) -> tuple[np.ndarray, np.ndarray]:
    b = u_trim(b)
    db = b.size - 1
    if db < 0:
        raise ZeroDivisionError("division by the zero polynomial")
    r = u_trim(a).copy()
    if r.size - 1 < db:
        return r[:0], r
    inv_lc = F.inv(int(b[-1]))
    bm = F.mul(b, inv_lc)
    q = np.zeros(r.size - db, dtype=np.uint64)
    for i in range(r.size - 1, db - 1, -1):
        c = int(r[i])
        if c:
            q[i - db] = c
            r[i - db:i + 1] ^= F.mul(c, bm)
    q = F.mul(q, inv_lc)
    return u_trim(q), u_trim(r[:db])


def u_mod(F: Field, a, b) -> np.ndarray:
    return u_divmod(F, a, b)[1]


def u_monic(F: Field, a) -> np.ndarray:
    a = u_trim(a)
    if a.size == 0:
        return a
    return F.mul(a, F.inv(int(a[-1])))


def u_gcd(F: Field, a, b) -> np.ndarray:
    a, b = u_trim(a), u_trim(b)
    while b.size:
        a, b = b, u_mod(F, a, b)
    return u_monic(F, a)


def u_eval(F: Field, p, x):
    """Horner evaluation; x may be an array of points."""
    p = u_trim(p)
    x = np.asarray(x, dtype=np.uint64)
    acc = np.zeros(x.shape, dtype=np.uint64)
    for c in p[::-1].tolist():
        acc = F.mul(acc, x) ^ np.uint64(c)
    return acc


def u_from_roots(F: Field, roots) -> np.ndarray:
    p = np.ones(1, dtype=np.uint64)
    for r in roots:
        p = u_mul(F, p, np.array([r, 1], dtype=np.uint64))
    return p


def u_square_mod(F: Field, a, g) -> np.ndarray:
    """a^2 mod g.  In characteristic 2, (Σ a_i X^i)^2 = Σ a_i^2 X^{2i}."""
    a = u_trim(a)
    sq = np.zeros(max(2 * a.size - 1, 0), dtype=np.uint64)
    sq[::2] = F.mul(a, a)
    return u_mod(F, sq, g)


def u_frobenius_x(F: Field, g) -> np.ndarray:
    """X^(2^m) mod g."""
    r = u_mod(F, np.array([0, 1], dtype=np.uint64), g)
    for _ in range(F.m):
        r = u_square_mod(F, r, g)
    return r


def u_trace_mod(F: Field, delta: int, g) -> np.ndarray:
    """Tr(δX) = Σ_{i<m} (δX)^(2^i) mod g."""
    r = u_mod(F, np.array([0, delta], dtype=np.uint64), g)
    acc = r.copy()
    for _ in range(F.m - 1):
        r = u_square_mod(F, r, g)
        acc = u_add(acc, r)
    return acc


def roots_dense(F: Field, p, rng: np.random.Generator | None = None) -> list[int]:
    """All distinct roots in F of the dense polynomial p, sorted."""
    p = u_monic(F, p)
    if p.size == 0:
        raise ValueError("the zero polynomial has every element as a root")
    if p.size == 1:
        return []
    rng = rng if rng is not None else np.random.default_rng(0)
    xq = u_frobenius_x(F, p)
    split = u_gcd(F, p, u_add(xq, np.array([0, 1], dtype=np.uint64)))
    out: list[int] = []
    _split_linear(F, split, rng, out)
    return sorted(out)


def _split_linear(F: Field, g, rng, out):
    d = g.size - 1
    if d <= 0:
        return
    if d == 1:
        out.append(int(g[0]))        # monic X + c has root c in characteristic 2
        return
    while True:
        delta = F.random_nonzero(rng)
        a = u_gcd(F, g, u_trace_mod(F, delta, g))
        if 0 < a.size - 1 < d:
            break
    b, _ = u_divmod(F, g, a)
    _split_linear(F, a, rng, out)
    _split_linear(F, u_monic(F, b), rng, out)


def roots_exhaustive(F: Field, p) -> list[int]:
    """Roots by evaluating at every field element (for q^m <= 2^16)."""
    if F.order > 1 << 16:
        raise ValueError("exhaustive root search limited to fields of size <= 2^16")
    xs = np.arange(F.order, dtype=np.uint64)
    vals = u_eval(F, u_trim(p), xs)
    return [int(x) for x in xs[vals == 0]]


# ---------------------------------------------------------------------------
# univariate API on MPoly


def _as_dense(p: MPoly) -> np.ndarray:
    if p.nvars != 1:
        raise ValueError("expected a univariate polynomial")
    return p.dense(0)


def gcd_univariate(p1: MPoly, p2: MPoly) -> MPoly:
    F = p1.field
    g = u_gcd(F, _as_dense(p1), _as_dense(p2))
    return MPoly.from_dense(F, g)


def roots_univariate(p: MPoly, rng: np.random.Generator | None = None) -> list[int]:
    return roots_dense(p.field, _as_dense(p), rng)


# ---------------------------------------------------------------------------
# resultants


def sylvester_matrix(F: Field, a, b) -> np.ndarray:
    """Sylvester matrix of dense polynomials with formal degrees len-1."""
    da, db = len(a) - 1, len(b) - 1
    s = da + db
    S = np.zeros((s, s), dtype=np.uint64)
    ar = np.asarray(a, dtype=np.uint64)[::-1]
    br = np.asarray(b, dtype=np.uint64)[::-1]
    for i in range(db):
        S[i, i:i + da + 1] = ar
    for i in range(da):
        S[db + i, i:i + db + 1] = br
    return S


def resultant_univariate(F: Field, a, b) -> int:
    a, b = u_trim(a), u_trim(b)
    if a.size == 0 or b.size == 0:
        return 0
    if a.size == 1 and b.size == 1:
        return 1
    return int(batched_det(F, sylvester_matrix(F, a, b)[None])[0])


def _bivariate_parts(p1: MPoly, p2: MPoly, var: int):
    if p1.nvars != 2 or p2.nvars != 2:
        raise ValueError("resultant_bivariate expects polynomials in two variables")
    if p1.is_zero() or p2.is_zero():
        raise ValueError("resultant of a zero polynomial")
    return p1.coeffs_in(var), p2.coeffs_in(var)


def resultant_bivariate(p1: MPoly, p2: MPoly, var: int, method: str = "auto") -> MPoly:
    """Res_var(p1, p2) as a univariate MPoly in the remaining variable.

    ``method`` is "interpolate" (evaluate the Sylvester determinant at
    enough points and interpolate), "sylvester" (fraction-free determinant
    with polynomial entries) or "auto".
    """
    F = p1.field
    c1, c2 = _bivariate_parts(p1, p2, var)
    d1, d2 = len(c1) - 1, len(c2) - 1
    if d1 == 0 and d2 == 0:
        return MPoly.constant(F, 1, 1)
    if d1 == 0:
        return MPoly.from_dense(F, _u_pow(F, c1[0], d2))
    if d2 == 0:
        return MPoly.from_dense(F, _u_pow(F, c2[0], d1))
    maxdeg1 = max(u_deg(c) for c in c1)
    maxdeg2 = max(u_deg(c) for c in c2)
    bound = min(p1.total_degree() * p2.total_degree(), d2 * maxdeg1 + d1 * maxdeg2)
    if method == "auto":
        method = "interpolate" if F.order > bound + 1 else "sylvester"
    if method == "interpolate":
        coeffs = _resultant_interpolate(F, c1, c2, bound)
    elif method == "sylvester":
        coeffs = _resultant_bareiss(F, c1, c2)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MPoly.from_dense(F, coeffs)


def _u_pow(F, a, k):
    r = np.ones(1, dtype=np.uint64)
    for _ in range(k):
        r = u_mul(F, r, a)
    return r


def _specialize(F: Field, coeffs, xs) -> np.ndarray:
    """Matrix (len(xs), len(coeffs)) of coefficient values at each point."""
    return np.stack([u_eval(F, c, xs) for c in coeffs], axis=1)


def _resultant_interpolate(F: Field, c1, c2, bound: int) -> np.ndarray:
    npts = bound + 1
    xs = np.arange(npts, dtype=np.uint64)
    A = _specialize(F, c1, xs)
    B = _specialize(F, c2, xs)
    d1, d2 = A.shape[1] - 1, B.shape[1] - 1
    s = d1 + d2
    S = np.zeros((npts, s, s), dtype=np.uint64)
    for i in range(d2):
        S[:, i, i:i + d1 + 1] = A[:, ::-1]
    for i in range(d1):
        S[:, d2 + i, i:i + d2 + 1] = B[:, ::-1]
    vals = batched_det(F, S)
    return newton_interpolate(F, xs, vals)


def newton_interpolate(F: Field, xs, ys) -> np.ndarray:
    """Coefficients of the polynomial of degree < len(xs) through (xs, ys)."""
    xs = np.asarray(xs, dtype=np.uint64)
    c = np.asarray(ys, dtype=np.uint64).copy()
    N = xs.size
    for j in range(1, N):
        c[j:] = F.mul(c[j:] ^ c[j - 1:-1], F.inv(xs[j:] ^ xs[:N - j]))
    p = np.array([c[N - 1]], dtype=np.uint64)
    for j in range(N - 2, -1, -1):
        shifted = np.zeros(p.size + 1, dtype=np.uint64)
        shifted[1:] = p
        shifted[:-1] ^= F.mul(p, int(xs[j]))
        shifted[0] ^= c[j]
        p = shifted
    return u_trim(p)


def _resultant_bareiss(F: Field, c1, c2) -> np.ndarray:
    """Fraction-free (Bareiss) determinant of the Sylvester matrix over F[X]."""
    d1, d2 = len(c1) - 1, len(c2) - 1
    s = d1 + d2
    zero = np.zeros(0, dtype=np.uint64)
    M = [[zero for _ in range(s)] for _ in range(s)]
    for i in range(d2):
        for j, c in enumerate(reversed(c1)):
            M[i][i + j] = u_trim(c)
    for i in range(d1):
        for j, c in enumerate(reversed(c2)):
            M[d2 + i][i + j] = u_trim(c)
    prev = np.ones(1, dtype=np.uint64)
    for k in range(s - 1):
        if M[k][k].size == 0:
            swap = next((r for r in range(k + 1, s) if M[r][k].size), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
        for i in range(k + 1, s):
            for j in range(k + 1, s):
                num = u_add(u_mul(F, M[k][k], M[i][j]), u_mul(F, M[i][k], M[k][j]))
                q, r = u_divmod(F, num, prev)
                if r.size:
                    raise DivisionError("Bareiss step was not exact")
                M[i][j] = q
            M[i][k] = zero
        prev = M[k][k]
    return u_trim(M[s - 1][s - 1])

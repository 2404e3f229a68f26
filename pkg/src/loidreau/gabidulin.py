"""Linearized polynomials and Gabidulin codes.

A linearized polynomial ``L`` is stored as its coefficient array ``c`` with
``L(x) = sum_i c[i] * x^(2^i)``.  Composition plays the role of
multiplication: ``compose(A, B)`` is the map ``x -> A(B(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import Field
from .linalg import Subspace, matmul, nullspace


class DecodingFailure(Exception):
    """Raised when a received word is not within the decoding radius."""


# ---------------------------------------------------------------------------
# linearized polynomials


def qdeg(L) -> int:
    nz = np.flatnonzero(np.asarray(L))
    return int(nz[-1]) if nz.size else -1


def qtrim(L) -> np.ndarray:
    L = np.asarray(L, dtype=np.uint64)
    return L[: qdeg(L) + 1].copy()


def qpoly_eval(F: Field, L, x):
    """Evaluate L at x (scalar or array)."""
    L = np.asarray(L, dtype=np.uint64)
    x = np.asarray(x, dtype=np.uint64)
    acc = np.zeros(x.shape, dtype=np.uint64)
    for i, c in enumerate(L.tolist()):
        if c:
            acc ^= F.mul(c, F.frobenius(x, i))
    return acc


def compose(F: Field, A, B) -> np.ndarray:
    """Coefficients of A∘B: (A∘B)_k = sum_{i+j=k} a_i * b_j^[i]."""
    A, B = qtrim(A), qtrim(B)
    if A.size == 0 or B.size == 0:
        return np.zeros(0, dtype=np.uint64)
    out = np.zeros(A.size + B.size - 1, dtype=np.uint64)
    for i, a in enumerate(A.tolist()):
        if a:
            out[i:i + B.size] ^= F.mul(a, F.frobenius(B, i))
    return qtrim(out)


def qpoly_left_divide(F: Field, N, V) -> tuple[np.ndarray, np.ndarray]:
    """(Q, R) with N = V∘Q + R and qdeg R < qdeg V."""
    V = qtrim(V)
    e = V.size - 1
    if e < 0:
        raise ZeroDivisionError("division by the zero linearized polynomial")
    R = qtrim(N).copy()
    Q = np.zeros(max(R.size - e, 0), dtype=np.uint64)
    inv_lead = F.inv(int(V[e]))
    while R.size - 1 >= e:
        d = R.size - 1
        c = d - e
        # leading term of V∘(q x^[c]) is v_e * q^[e] x^[d]
        qc = F.frobenius(F.mul(int(R[d]), inv_lead), -e)
        Q[c] = qc
        R[c:c + e + 1] ^= F.mul(V, _frob_powers(F, qc, e + 1))
        R = qtrim(R)
    return qtrim(Q), R


def qpoly_right_divide(F: Field, N, V) -> tuple[np.ndarray, np.ndarray]:
    """(Q, R) with N = Q∘V + R and qdeg R < qdeg V."""
    V = qtrim(V)
    e = V.size - 1
    if e < 0:
        raise ZeroDivisionError("division by the zero linearized polynomial")
    R = qtrim(N).copy()
    Q = np.zeros(max(R.size - e, 0), dtype=np.uint64)
    while R.size - 1 >= e:
        d = R.size - 1
        c = d - e
        # leading term of (q x^[c])∘V is q * v_e^[c] x^[d]
        Vc = F.frobenius(V, c)
        qc = F.div(int(R[d]), int(Vc[e]))
        Q[c] = qc
        R[c:c + e + 1] ^= F.mul(qc, Vc)
        R = qtrim(R)
    return qtrim(Q), R


def _frob_powers(F: Field, x: int, count: int) -> np.ndarray:
    """(x, x^[1], ..., x^[count-1])."""
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        out[i] = F.frobenius(x, i)
    return out


# ---------------------------------------------------------------------------
# Gabidulin codes


def moore_matrix(F: Field, g, r: int) -> np.ndarray:
    """r x n matrix whose row i is the entrywise q^i-Frobenius of g."""
    if r < 1:
        raise ValueError("Moore matrix needs at least one row")
    g = np.asarray(g, dtype=np.uint64)
    return np.stack([F.frobenius(g, i) for i in range(r)])


@dataclass(frozen=True, eq=False)
class GabidulinCode:
    field: Field
    g: np.ndarray
    k: int

    def __post_init__(self):
        g = np.asarray(self.g, dtype=np.uint64)
        object.__setattr__(self, "g", g)
        n = g.size
        if not 0 < self.k <= n <= self.field.m:
            raise ValueError(f"need 0 < k <= n <= m, got k={self.k}, n={n}, m={self.field.m}")
        if self.field.rank_q(g) != n:
            raise ValueError("evaluation vector must have full rank weight")

    @property
    def n(self) -> int:
        return self.g.size

    @property
    def generator(self) -> np.ndarray:
        return moore_matrix(self.field, self.g, self.k)

    def subspace(self) -> Subspace:
        return Subspace(self.field, self.generator)

    def encode(self, msg) -> np.ndarray:
        return gab_encode(self, msg)

    def decode(self, y, radius: int | None = None):
        return gab_decode(self, y, radius)


def gab_encode(code: GabidulinCode, msg) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.uint64)
    if msg.shape != (code.k,):
        raise ValueError(f"message must have length {code.k}")
    return matmul(code.field, msg, code.generator)


def gab_decode(code: GabidulinCode, y, radius: int | None = None):
    """Return (msg, error) with y = msg*G + error and rank(error) <= radius.

    Finds a nonzero pair (V, N), qdeg V <= radius and qdeg N <= k - 1 + radius,
    with V(y_i) = N(g_i) for every i; then N = V∘f where f carries the message.
    Raises DecodingFailure when no such codeword exists.
    """
    F, k, n = code.field, code.k, code.n
    t_max = (n - k) // 2
    t = t_max if radius is None else radius
    if not 0 <= t <= t_max:
        raise ValueError(f"radius {t} exceeds unique decoding radius {t_max}")
    y = np.asarray(y, dtype=np.uint64)
    if y.shape != (n,):
        raise ValueError(f"received word must have length {n}")

    cols = [F.frobenius(y, i) for i in range(t + 1)]
    cols += [F.frobenius(code.g, i) for i in range(k + t)]
    K = nullspace(F, np.stack(cols, axis=1))
    if K.dim == 0:
        raise DecodingFailure("interpolation system has only the trivial solution")
    sol = K.basis[0]
    V, N = sol[: t + 1], sol[t + 1:]
    if qdeg(V) < 0:
        raise DecodingFailure("interpolation produced a zero error locator")
    f, R = qpoly_left_divide(F, N, V)
    if R.size:
        raise DecodingFailure("error locator does not divide the interpolant")
    if f.size > k:
        raise DecodingFailure("quotient degree exceeds code dimension")
    msg = np.zeros(k, dtype=np.uint64)
    msg[: f.size] = f
    err = y ^ gab_encode(code, msg)
    if F.rank_q(err) > t:
        raise DecodingFailure(f"error rank {F.rank_q(err)} exceeds radius {t}")
    return msg, err


def dual_evaluation_vector(F: Field, g, r: int) -> np.ndarray:
    """b of rank n with dual(G_r(g)) = G_{n-r}(b), first nonzero entry 1.

    b spans the intersection of the Frobenius twists N^[-i], i < n - r, of
    the dual N of G_r(g), since b^[i] must lie in N for all those i.
    """
    g = np.asarray(g, dtype=np.uint64)
    n = g.size
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got r={r}, n={n}")
    N = nullspace(F, moore_matrix(F, g, r))
    S = N
    for i in range(1, n - r):
        S = S & N.frobenius(-i)
        if S.dim <= 1:
            break
    if S.dim != 1:
        raise ValueError(f"dual evaluation space has dimension {S.dim}; input not of full rank")
    b = S.basis[0].copy()
    if F.rank_q(b) != n:
        raise ValueError("dual evaluation vector is not of full rank")
    return b

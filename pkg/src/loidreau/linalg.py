"""Dense linear algebra over F_{2^m} and over F_2.

Matrices over the big field are ``uint64`` arrays of field elements; matrices
over F_2 are ``uint8`` arrays of 0/1.  :class:`Subspace` keeps its basis in
reduced row echelon form, so two subspaces are equal iff their bases are.
"""

from __future__ import annotations

import numpy as np

from .gf import Field


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices over F_{2^m}


def matmul(F: Field, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.uint64)
    B = np.asarray(B, dtype=np.uint64)
    vec_a, vec_b = A.ndim == 1, B.ndim == 1
    A2 = A[None, :] if vec_a else A
    B2 = B[:, None] if vec_b else B
    if A2.shape[1] != B2.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if A2.shape[1] == 0:
        C = np.zeros((A2.shape[0], B2.shape[1]), dtype=np.uint64)
    else:
        C = np.bitwise_xor.reduce(F.mul(A2[:, :, None], B2[None, :, :]), axis=1)
    if vec_a and vec_b:
        return C[0, 0]
    if vec_a:
        return C[0]
    if vec_b:
        return C[:, 0]
    return C


def rref(F: Field, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    M = np.array(M, dtype=np.uint64, ndmin=2)
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        pv = int(M[r, c])
        if pv != 1:
            M[r] = F.mul(M[r], F.inv(pv))
        f = M[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            M[hit] ^= F.mul(f[hit, None], M[r][None, :])
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(F: Field, M) -> int:
    return len(rref(F, M)[1])


def det(F: Field, M) -> int:
    M = np.array(M, dtype=np.uint64, ndmin=2)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionError("determinant of a non-square matrix")
    d = 1
    for c in range(n):
        nz = np.flatnonzero(M[c:, c])
        if nz.size == 0:
            return 0
        p = c + int(nz[0])
        if p != c:
            M[[c, p]] = M[[p, c]]
        pv = int(M[c, c])
        d = F.mul(d, pv)
        if c + 1 < n:
            f = F.mul(M[c + 1:, c], F.inv(pv))
            M[c + 1:] ^= F.mul(f[:, None], M[c][None, :])
    return d


def inverse(F: Field, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.uint64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    R, piv = rref(F, np.hstack([M, np.eye(n, dtype=np.uint64)]))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise np.linalg.LinAlgError("singular matrix")
    return R[:, n:]


def solve_right(F: Field, A, b):
    """One solution x of A x = b, or None if the system is inconsistent."""
    A = np.array(A, dtype=np.uint64, ndmin=2)
    b = np.asarray(b, dtype=np.uint64)
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"A is {A.shape} but b has length {b.shape[0]}")
    n = A.shape[1]
    R, piv = rref(F, np.hstack([A, b[:, None]]))
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.uint64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def solve_left(F: Field, A, b):
    """One solution x of x A = b, or None."""
    return solve_right(F, np.asarray(A, dtype=np.uint64).T, b)


def nullspace(F: Field, M) -> "Subspace":
    """The right kernel {x : M x = 0}."""
    M = np.array(M, dtype=np.uint64, ndmin=2)
    n = M.shape[1]
    R, piv = rref(F, M)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.uint64)
    for row, f in enumerate(free):
        K[row, f] = 1
        for i, c in enumerate(piv):
            K[row, c] = R[i, f]
    return Subspace(F, K, n)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """An F_{2^m}-linear subspace of F_{2^m}^n in canonical (RREF) form."""

    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, F: Field, generators, n: int | None = None, *, _reduced=False):
        G = np.asarray(generators, dtype=np.uint64)
        if G.ndim == 1:
            G = G[None, :] if G.size or n is None else G.reshape(0, n)
        if n is None:
            n = G.shape[1]
        if G.size == 0:
            G = np.zeros((0, n), dtype=np.uint64)
        if G.shape[1] != n:
            raise DimensionError(f"generators have length {G.shape[1]}, ambient is {n}")
        self.field = F
        self.n = n
        if _reduced:
            self.basis, self.pivots = G, _pivots(G)
        else:
            self.basis, self.pivots = rref(F, G) if G.shape[0] else (G, [])
        self.basis.setflags(write=False)

    @classmethod
    def zero(cls, F: Field, n: int) -> "Subspace":
        return cls(F, np.zeros((0, n), dtype=np.uint64), n, _reduced=True)

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        return cls(F, np.eye(n, dtype=np.uint64), n, _reduced=True)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, {self.field!r})"

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.n == other.n and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.field, self.n, self.basis.tobytes()))

    def __contains__(self, v) -> bool:
        v = np.asarray(v, dtype=np.uint64)
        return rank(self.field, np.vstack([self.basis, v[None, :]])) == self.dim

    def __add__(self, other):
        return subspace_sum(self, other)

    def __and__(self, other):
        return subspace_intersect(self, other)

    def frobenius(self, i: int) -> "Subspace":
        return code_frobenius(self, i)

    def dual(self) -> "Subspace":
        return dual_code(self)

    def __le__(self, other):
        _check_ambient(self, other)
        return (self + other).dim == other.dim


def _pivots(R) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in R]


def _check_ambient(A: Subspace, B: Subspace):
    if A.n != B.n or A.field != B.field:
        raise DimensionError(f"ambient mismatch: {A!r} vs {B!r}")


def span(F: Field, vectors, n: int | None = None) -> Subspace:
    return Subspace(F, vectors, n)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _check_ambient(A, B)
    if B.dim == 0:
        return A
    if A.dim == 0:
        return B
    return Subspace(A.field, np.vstack([A.basis, B.basis]), A.n)


def dual_code(C: Subspace) -> Subspace:
    """Orthogonal complement for the bilinear form sum(x_i * c_i)."""
    if C.dim == 0:
        return Subspace.full(C.field, C.n)
    return nullspace(C.field, C.basis)


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B computed as the dual of (A^⊥ + B^⊥)."""
    _check_ambient(A, B)
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(A.field, A.n)
    return dual_code(subspace_sum(dual_code(A), dual_code(B)))


def zassenhaus_intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B by row-reducing the block matrix [[A, A], [B, 0]]."""
    _check_ambient(A, B)
    n = A.n
    top = np.hstack([A.basis, A.basis])
    bot = np.hstack([B.basis, np.zeros_like(B.basis)])
    R, piv = rref(A.field, np.vstack([top, bot]))
    rows = [R[i, n:] for i, c in enumerate(piv) if c >= n]
    return Subspace(A.field, np.array(rows, dtype=np.uint64).reshape(len(rows), n), n)


def code_frobenius(C: Subspace, i: int) -> Subspace:
    """Entrywise q^i-Frobenius of C.  Frobenius fixes 0 and 1, so RREF is kept."""
    if i % C.field.m == 0:
        return C
    return Subspace(C.field, C.field.frobenius(C.basis, i), C.n, _reduced=True)


def random_subspace(F: Field, n: int, k: int, rng: np.random.Generator) -> Subspace:
    """Row space of a uniformly random full-rank k x n matrix."""
    while True:
        S = Subspace(F, F.random(rng, (k, n)), n)
        if S.dim == k:
            return S


# ---------------------------------------------------------------------------
# linear algebra over F_2


def gf2_rref(M) -> tuple[np.ndarray, list[int]]:
    M = np.array(M, dtype=np.uint8, ndmin=2) & 1
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        hit = np.flatnonzero(M[:, c])
        hit = hit[hit != r]
        M[hit] ^= M[r]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def gf2_rank(M) -> int:
    return len(gf2_rref(M)[1])


def gf2_solve(A, B):
    """One X with A X = B over F_2 (B may have several columns), or None."""
    A = np.array(A, dtype=np.uint8, ndmin=2)
    B = np.asarray(B, dtype=np.uint8)
    vec = B.ndim == 1
    B2 = B[:, None] if vec else B
    n = A.shape[1]
    R, piv = gf2_rref(np.hstack([A, B2]))
    if piv and piv[-1] >= n:
        return None
    X = np.zeros((n, B2.shape[1]), dtype=np.uint8)
    for i, c in enumerate(piv):
        X[c] = R[i, n:]
    return X[:, 0] if vec else X


def gf2_inverse(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.uint8)
    n = M.shape[0]
    R, piv = gf2_rref(np.hstack([M, np.eye(n, dtype=np.uint8)]))
    if len(piv) < n or piv[n - 1] != n - 1:
        raise np.linalg.LinAlgError("singular matrix over F_2")
    return R[:, n:]


def gf2_matmul(A, B) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64) & 1).astype(np.uint8)


def random_gf2_invertible(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        M = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        if gf2_rank(M) == n:
            return M


def qary_combine(F: Field, v, Q) -> np.ndarray:
    """The product v Q for v over F_{2^m} and Q over F_2."""
    v = np.asarray(v, dtype=np.uint64)
    Q = np.asarray(Q, dtype=np.uint8).astype(bool)
    if Q.shape[0] == 0:
        return np.zeros(Q.shape[1], dtype=np.uint64)
    return np.bitwise_xor.reduce(np.where(Q, v[:, None], np.uint64(0)), axis=0)


def solve_qary(F: Field, u, v):
    """Q over F_2 with u Q = v, or None.

    Expanding every coordinate over F_2 turns uQ = v into the F_2 system
    E Q = V where E and V are the m x n expansions of u and v.
    """
    E = F.qary_expand(u)
    V = F.qary_expand(v)
    return gf2_solve(E, V)


def batched_det(F: Field, M) -> np.ndarray:
    """Determinants of a stack of square matrices, shape (B, s, s) -> (B,)."""
    M = np.array(M, dtype=np.uint64)
    B, s, _ = M.shape
    d = np.ones(B, dtype=np.uint64)
    alive = np.ones(B, dtype=bool)
    idx = np.arange(B)
    for c in range(s):
        col = M[:, c:, c] != 0
        has = col.any(axis=1)
        alive &= has
        p = c + np.argmax(col, axis=1)
        if np.any(p != c):
            rows_c = M[idx, c].copy()
            M[idx, c] = M[idx, p]
            M[idx, p] = rows_c
        piv = M[:, c, c]
        piv_safe = np.where(piv == 0, np.uint64(1), piv)
        d = F.mul(d, piv)
        if c + 1 < s:
            f = F.mul(M[:, c + 1:, c], F.inv(piv_safe)[:, None])
            M[:, c + 1:, :] ^= F.mul(f[:, :, None], M[:, c, None, :])
    return np.where(alive, d, np.uint64(0))

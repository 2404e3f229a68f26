"""The projective action of GL(λ, F_2) on masking tuples.

A matrix A acts on (h, β) by

    (1, β') = (1, β) A / D,      h' = D * A^{-1} h,

where D is the first entry of (1, β) A and h is the λ x n matrix whose rows
are h_0, ..., h_{λ-1}.  Over F_2 the scalar matrices are trivial, so
PGL(λ, 2) = GL(λ, 2).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .gf import Field
from .linalg import gf2_inverse, gf2_rank


@lru_cache(maxsize=None)
def _gl2(lam: int) -> tuple:
    mats = []
    for bits in itertools.product((0, 1), repeat=lam * lam):
        A = np.array(bits, dtype=np.uint8).reshape(lam, lam)
        if gf2_rank(A) == lam:
            A.setflags(write=False)
            mats.append(A)
    return tuple(mats)


def pgl_elements(lam: int, q: int = 2) -> tuple:
    """All elements of PGL(λ, q), one representative matrix each."""
    if q != 2:
        raise NotImplementedError("only q = 2")
    if lam > 4:
        raise ValueError("enumeration of PGL(λ, 2) is limited to λ <= 4")
    return _gl2(lam)


def pgl_order(lam: int, q: int = 2) -> int:
    order = 1
    for j in range(lam):
        order *= q ** lam - q ** j
    return order // (q - 1)


def random_gl(lam: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        A = rng.integers(0, 2, size=(lam, lam), dtype=np.uint8)
        if gf2_rank(A) == lam:
            return A


def _row_times(F: Field, row, A) -> np.ndarray:
    """(row) A for row over F_{2^m} and A over F_2; row may be (..., λ)."""
    row = np.asarray(row, dtype=np.uint64)
    Ab = np.asarray(A, dtype=np.uint8).astype(bool)
    return np.bitwise_xor.reduce(
        np.where(Ab, row[..., :, None], np.uint64(0)), axis=-2)


def act_on_beta(F: Field, A, beta):
    """Image β' of β (shape (..., λ-1)) under A.  Points with D = 0 map to None."""
    beta = np.asarray(beta, dtype=np.uint64)
    ones = np.ones(beta.shape[:-1] + (1,), dtype=np.uint64)
    v = _row_times(F, np.concatenate([ones, beta], axis=-1), A)
    D = v[..., 0]
    if beta.ndim == 1:
        if D == 0:
            return None
        return F.mul(v[1:], F.inv(int(D)))
    ok = D != 0
    out = np.zeros_like(beta)
    out[ok] = F.mul(v[ok, 1:], F.inv(D[ok])[:, None])
    return out, ok


def act_on_solution(F: Field, A, h, beta):
    """Image (h', β') of a solution tuple under A."""
    h = np.asarray(h, dtype=np.uint64)
    beta = np.asarray(beta, dtype=np.uint64)
    v = _row_times(F, np.concatenate([[1], beta]).astype(np.uint64), A)
    D = int(v[0])
    if D == 0:
        raise ZeroDivisionError("(1, β) is F_2-dependent")
    beta2 = F.mul(v[1:], F.inv(D))
    Ainv = np.asarray(gf2_inverse(A), dtype=bool)
    mixed = np.bitwise_xor.reduce(np.where(Ainv[:, :, None], h[None, :, :], np.uint64(0)), axis=1)
    return F.mul(mixed, D), beta2


def stabilizer(F: Field, beta) -> np.ndarray | None:
    """A non-identity element of PGL fixing β, or None if the stabilizer is trivial."""
    beta = np.asarray(beta, dtype=np.uint64)
    lam = beta.size + 1
    eye = np.eye(lam, dtype=np.uint8)
    for A in pgl_elements(lam):
        if np.array_equal(A, eye):
            continue
        img = act_on_beta(F, A, beta)
        if img is not None and np.array_equal(img, beta):
            return np.array(A)
    return None


def stabilizer_relation(A) -> list[tuple[list[int], list[list[int]]]]:
    """Coefficients of the quadratic relations β satisfies when A fixes it.

    For j = 1..λ-1 the relation is (a_00 + Σ a_i0 X_i) X_j - (a_0j + Σ a_ij X_i) = 0;
    each entry is returned as (column 0 of A, column j of A).
    """
    A = np.asarray(A, dtype=np.uint8)
    lam = A.shape[0]
    return [(A[:, 0].tolist(), A[:, j].tolist()) for j in range(1, lam)]

"""Loidreau's encryption scheme: Gabidulin codes masked by a λ-dimensional
F_q-subspace V of F_{q^m}.

Key generation draws an evaluation vector g, the masking space
V = <1, β_1, ..., β_{λ-1}> and a matrix P whose transpose decomposes as
P^T = P_0 + Σ β_i P_i with P_i over F_2.  The public generator matrix is
G_pub = G P^{-1} with G the k x n Moore matrix of g.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .distinguisher import frobenius_sum_dim, in_regime, loidreau_bound
from .gabidulin import GabidulinCode, dual_evaluation_vector, gab_decode, moore_matrix
from .gf import Field
from .linalg import Subspace, det, inverse, matmul, qary_combine
from .pgl import stabilizer


class ParameterError(ValueError):
    pass


class KeygenError(RuntimeError):
    """Key generation gave up; ``assumption`` names the last failing check."""

    def __init__(self, msg, assumption=None, retries=None):
        super().__init__(msg)
        self.assumption = assumption
        self.retries = retries


@dataclass(frozen=True)
class Params:
    q: int
    m: int
    n: int
    k: int
    lam: int

    def __post_init__(self):
        if self.q != 2:
            raise ParameterError("only q = 2 is supported")
        if not 0 < self.k < self.n <= self.m:
            raise ParameterError(f"need 0 < k < n <= m, got k={self.k} n={self.n} m={self.m}")
        if not 1 <= self.lam <= self.m:
            raise ParameterError(f"need 1 <= λ <= m, got λ={self.lam}")
        if self.t < 1:
            raise ParameterError(f"t = floor((n-k)/2λ) = {self.t} < 1")

    @property
    def t(self) -> int:
        return (self.n - self.k) // (2 * self.lam)

    @property
    def distinguishable(self) -> bool:
        return in_regime(self.n, self.k, self.lam)

    def as_tuple(self) -> tuple:
        return (self.q, self.m, self.n, self.k, self.lam)

    def __str__(self):
        return ",".join(map(str, self.as_tuple()))

    @classmethod
    def parse(cls, text: str) -> "Params":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ParameterError(f"expected q,m,n,k,lambda; got {text!r}")
        try:
            return cls(*map(int, parts))
        except ValueError:
            raise ParameterError(f"non-integer parameter in {text!r}") from None


@dataclass(eq=False)
class PublicKey:
    field: Field
    params: Params
    G_pub: np.ndarray

    @property
    def t(self) -> int:
        return self.params.t


@dataclass(eq=False)
class SecretKey:
    field: Field
    params: Params
    g: np.ndarray
    beta: np.ndarray
    # P^T = P_parts[0] + Σ_i beta[i-1] * P_parts[i]
    P_parts: np.ndarray
    retries: dict = field(default_factory=dict)

    @property
    def P(self) -> np.ndarray:
        return assemble_masked(self.field, self.beta, self.P_parts).T.copy()

    @property
    def code(self) -> GabidulinCode:
        return GabidulinCode(self.field, self.g, self.params.k)


def assemble_masked(F: Field, beta, parts) -> np.ndarray:
    """parts[0] + Σ beta[i-1] parts[i] for F_2 matrices ``parts``."""
    coeffs = np.concatenate([[1], np.asarray(beta, dtype=np.uint64)]).astype(np.uint64)
    parts = np.asarray(parts, dtype=np.uint8).astype(bool)
    terms = np.where(parts, coeffs[:, None, None], np.uint64(0))
    return np.bitwise_xor.reduce(terms, axis=0)


def masking_space_ok(F: Field, beta) -> bool:
    """(1, β_1, ..., β_{λ-1}) linearly independent over F_2."""
    v = np.concatenate([[1], np.asarray(beta, dtype=np.uint64)]).astype(np.uint64)
    return F.rank_q(v) == v.size


def _random_beta(F: Field, lam: int, rng) -> np.ndarray:
    while True:
        beta = F.random(rng, lam - 1)
        if masking_space_ok(F, beta):
            return beta


# ---------------------------------------------------------------------------
# assumptions of the key-recovery analysis


def beta_moore_det(F: Field, beta, indices) -> int:
    """det of the λ x λ matrix with rows (1, β^[i]) for i in ``indices``."""
    beta = np.asarray(beta, dtype=np.uint64)
    rows = [np.concatenate([[1], F.frobenius(beta, i)]) for i in indices]
    return det(F, np.array(rows, dtype=np.uint64))


def check_assumption1(F: Field, beta, n_minus_k: int, rng=None,
                      exhaustive_limit: int = 10_000, samples: int = 200) -> bool:
    """Every λ-subset of {1, ..., n-k-1} gives a nonzero Frobenius determinant."""
    lam = len(beta) + 1
    pool = range(1, n_minus_k)
    if lam > len(pool):
        return False
    if math.comb(len(pool), lam) <= exhaustive_limit or rng is None:
        subsets = itertools.combinations(pool, lam)
    else:
        subsets = (sorted(rng.choice(len(pool), lam, replace=False) + 1) for _ in range(samples))
    return all(beta_moore_det(F, beta, I) != 0 for I in subsets)


def check_assumption2(C_dual: Subspace, params: Params) -> bool:
    return frobenius_sum_dim(C_dual, params.lam) == loidreau_bound(params.n, params.k, params.lam)


def check_assumption3(F: Field, beta) -> bool:
    """β has trivial stabilizer under the projective action."""
    return stabilizer(F, beta) is None


# ---------------------------------------------------------------------------


def public_dual_code(pk: PublicKey) -> Subspace:
    return Subspace(pk.field, pk.G_pub).dual()


def secret_solution(sk: SecretKey) -> tuple[np.ndarray, np.ndarray]:
    """The solution tuple (h, β) carried by the secret key: h_j = a P_j."""
    F, p = sk.field, sk.params
    a = dual_evaluation_vector(F, sk.g, p.k)
    h = np.stack([qary_combine(F, a, Pj) for Pj in sk.P_parts])
    return h, sk.beta.copy()


def keygen(params: Params, rng: np.random.Generator, enforce_assumptions: bool = False,
           field: Field | None = None, max_retries: int = 1000):
    """Generate (PublicKey, SecretKey).

    With ``enforce_assumptions`` the key is resampled until the three
    hypotheses of the key-recovery analysis hold; the number of rejections
    per hypothesis is recorded in ``sk.retries``.
    """
    F = field or Field(params.m)
    if F.m != params.m:
        raise ParameterError("field degree does not match params.m")
    n, k, lam = params.n, params.k, params.lam
    retries = {"invertible": 0, "assumption1": 0, "assumption2": 0, "assumption3": 0}
    last = None
    for _ in range(max_retries):
        g = F.random_rank_vector(n, n, rng)
        beta = _random_beta(F, lam, rng)
        if enforce_assumptions:
            if not check_assumption1(F, beta, n - k, rng):
                retries["assumption1"] += 1
                last = "assumption1"
                continue
            if lam <= 4 and not check_assumption3(F, beta):
                retries["assumption3"] += 1
                last = "assumption3"
                continue
        parts = rng.integers(0, 2, size=(lam, n, n), dtype=np.uint8)
        PT = assemble_masked(F, beta, parts)
        try:
            Pinv = inverse(F, PT.T)
        except np.linalg.LinAlgError:
            retries["invertible"] += 1
            last = "invertible"
            continue
        G_pub = matmul(F, moore_matrix(F, g, k), Pinv)
        pk = PublicKey(F, params, G_pub)
        if enforce_assumptions and not check_assumption2(public_dual_code(pk), params):
            retries["assumption2"] += 1
            last = "assumption2"
            continue
        sk = SecretKey(F, params, g, beta, parts, retries)
        return pk, sk
    raise KeygenError(f"no valid key after {max_retries} attempts (last failure: {last})",
                      assumption=last, retries=retries)


def encrypt(pk: PublicKey, msg, rng: np.random.Generator) -> np.ndarray:
    """c = msg G_pub + e with e of rank weight exactly t."""
    F, p = pk.field, pk.params
    msg = np.asarray(msg, dtype=np.uint64)
    if msg.shape != (p.k,):
        raise ValueError(f"message must have {p.k} symbols")
    e = F.random_rank_vector(p.n, p.t, rng)
    return matmul(F, msg, pk.G_pub) ^ e


def decrypt(sk: SecretKey, c) -> np.ndarray:
    """Decode c P in G_k(g); raises DecodingFailure if the error is too large."""
    y = matmul(sk.field, np.asarray(c, dtype=np.uint64), sk.P)
    msg, _ = gab_decode(sk.code, y)
    return msg

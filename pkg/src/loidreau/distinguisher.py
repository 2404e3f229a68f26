"""Frobenius-sum distinguisher for masked Gabidulin codes.

For the dual C of a public code with masking dimension λ,
dim(C + C^[1] + ... + C^[λ]) <= λ(n - k) + λ, while for a random code of the
same dimension the sum almost always reaches min(n, (λ + 1)(n - k)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .linalg import Subspace, subspace_sum

LOIDREAU_LIKE = "loidreau-like"
RANDOM_LIKE = "random-like"


class RegimeWarning(UserWarning):
    """Parameters outside the rate regime where the distinguisher applies."""


def frobenius_sum_dim(C: Subspace, lam: int) -> int:
    if lam < 0:
        raise ValueError("λ must be non-negative")
    S = C
    for i in range(1, lam + 1):
        S = subspace_sum(S, C.frobenius(i))
        if S.dim == C.n:
            break
    return S.dim


def in_regime(n: int, k: int, lam: int) -> bool:
    """k > (λ - 1) n / λ + 1, in exact integer arithmetic."""
    return lam * k > (lam - 1) * n + lam


def loidreau_bound(n: int, k: int, lam: int) -> int:
    return lam * (n - k) + lam


def random_threshold(n: int, k: int, lam: int) -> int:
    return min(n, (lam + 1) * (n - k))


def distinguish(C: Subspace, lam: int, k: int) -> tuple[str, int]:
    """Classify the dual C (dimension n - k) of a public code.

    Returns (verdict, measured dimension).
    """
    n = C.n
    if not in_regime(n, k, lam):
        warnings.warn(
            f"k={k} <= (λ-1)n/λ + 1 for n={n}, λ={lam}: the distinguisher is not expected to work",
            RegimeWarning, stacklevel=2)
    d = frobenius_sum_dim(C, lam)
    verdict = LOIDREAU_LIKE if d < random_threshold(n, k, lam) else RANDOM_LIKE
    return verdict, d


@dataclass(frozen=True)
class DistinguisherRow:
    seed: int
    params: tuple
    dim_measured: int
    bound: int
    verdict: str

    HEADER = ("seed", "params", "dim_measured", "bound", "verdict")

    def as_row(self) -> list:
        return [self.seed, ",".join(map(str, self.params)), self.dim_measured,
                self.bound, self.verdict]

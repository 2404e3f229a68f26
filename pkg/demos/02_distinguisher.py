"""
Telling public keys apart from random codes
===========================================

Summing the dual of a public code with its first lam Frobenius images gives
a space of dimension at most lam(n-k)+lam.  Random codes fill the ambient
space instead.
"""

import numpy as np

from loidreau.distinguisher import frobenius_sum_dim
from loidreau.linalg import random_subspace
from loidreau.scheme import Params, keygen, public_dual_code

rng = np.random.default_rng(7)
for text in ("2,24,24,18,3", "2,20,20,14,2"):
    p = Params.parse(text)
    pub = [frobenius_sum_dim(public_dual_code(keygen(p, rng)[0]), p.lam) for _ in range(10)]
    F = keygen(p, rng)[0].field
    rnd = [frobenius_sum_dim(random_subspace(F, p.n, p.n - p.k, rng), p.lam) for _ in range(10)]
    print(p, "public:", pub)
    print(p, "random:", rnd)

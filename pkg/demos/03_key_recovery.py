"""
Recovering an equivalent secret key
===================================

The attack sees only the public key.  It rebuilds the one-dimensional spaces
A_i, turns them into a small polynomial system whose roots contain beta,
and reconstructs a key that decrypts like the real one.
"""

import numpy as np

from loidreau.attack import (attack_decrypt, build_reduced_system, compute_alpha_ratios,
                             full_attack, recover_one_dim_spaces, solve_system)
from loidreau.scheme import Params, decrypt, encrypt, keygen, public_dual_code

params = Params.parse("2,24,24,18,3")
rng = np.random.default_rng(11)
pk, sk = keygen(params, rng, enforce_assumptions=True)
F = pk.field

# the pipeline step by step
C = public_dual_code(pk)
step1 = recover_one_dim_spaces(C, params.lam)
print("subspace dimensions:", step1.dims)

alpha = compute_alpha_ratios(step1.spaces, params.lam)
system = build_reduced_system(F, alpha.alpha, params.lam)
print("reduced degrees:", [P.total_degree() for P in system.P])

info = {}
cands = solve_system(F, system.P, params.lam, rng, info)
print("resultant degree", info["resultant_degree"], "candidates", len(cands))
print("secret beta among them:", any(np.array_equal(c, sk.beta) for c in cands))

# or all at once, with a transcript
ek, transcript = full_attack(pk, params.lam, rng)
print(transcript.to_text())
print("seconds per stage:", {k: round(v, 3) for k, v in transcript.timings.items()})

msg = F.random(rng, params.k)
c = encrypt(pk, msg, rng)
print("equivalent key agrees with the secret key:",
      np.array_equal(attack_decrypt(ek, c), decrypt(sk, c)))

"""
Encrypting and decrypting with a masked Gabidulin code
=======================================================

A key pair is a Gabidulin code G_k(g) hidden behind a matrix P whose
entries live in the F_2-span of (1, beta_1, ..., beta_{lam-1}).
"""

import numpy as np

from loidreau.scheme import Params, keygen, encrypt, decrypt
from loidreau.serialize import bytes_to_messages, messages_to_bytes

params = Params.parse("2,24,24,18,3")
rng = np.random.default_rng(2026)
pk, sk = keygen(params, rng)
F = pk.field
print("parameters", params, "error rank t =", params.t)

# a message is k field symbols
msg = F.random(rng, params.k)
c = encrypt(pk, msg, rng)
print("decrypts correctly:", np.array_equal(decrypt(sk, c), msg))

# text goes through the byte codec: 3 bytes per symbol for m = 24
blocks = bytes_to_messages(b"rank metric is fun", F, params.k)
out = np.stack([decrypt(sk, encrypt(pk, m, rng)) for m in blocks])
print(messages_to_bytes(out, F))

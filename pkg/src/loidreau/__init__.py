"""Loidreau's rank-metric encryption scheme and a key-recovery attack on it."""

from .gf import Field
from .scheme import Params, PublicKey, SecretKey, keygen, encrypt, decrypt
from .distinguisher import frobenius_sum_dim, distinguish
from .attack import full_attack, attack_decrypt, recover_one_dim_spaces, AttackTranscript

__all__ = ["Field", "Params", "PublicKey", "SecretKey", "keygen", "encrypt", "decrypt",
           "frobenius_sum_dim", "distinguish", "full_attack", "attack_decrypt",
           "recover_one_dim_spaces", "AttackTranscript"]

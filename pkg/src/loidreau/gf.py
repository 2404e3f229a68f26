"""Arithmetic in binary extension fields F_{2^m}.

Elements are stored as integers whose bit ``i`` is the coefficient of
``x^i`` in the power basis of the defining modulus.  Vectors and matrices
are numpy ``uint64`` arrays of such integers, and every operation below
accepts either Python ints or arrays (with broadcasting).

For ``m <= TABLE_MAX_M`` multiplication goes through log/antilog tables;
larger fields use a vectorised shift-and-add multiplier.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

TABLE_MAX_M = 24

# Low-weight primitive polynomials over F_2 (trinomials where one exists,
# pentanomials otherwise), encoded with bit i = coefficient of x^i.
DEFAULT_MODULI = {
    2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11D,
    9: 0x211, 10: 0x409, 11: 0x805, 12: 0x1053, 13: 0x201B, 14: 0x402B,
    15: 0x8003, 16: 0x1002D, 17: 0x20009, 18: 0x40081, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021,
    24: 0x100001B, 25: 0x2000009, 26: 0x4000047, 27: 0x8000027,
    28: 0x10000009, 29: 0x20000005, 30: 0x40000053, 31: 0x80000009,
    32: 0x1000000C5, 33: 0x200002001, 34: 0x400000119, 35: 0x800000005,
    36: 0x1000000801, 37: 0x2000000053, 38: 0x4000000063,
    39: 0x8000000011, 40: 0x10000000039, 41: 0x20000000009,
    42: 0x40000000099, 43: 0x80000000059, 44: 0x100000000065,
    45: 0x20000000001B, 46: 0x4000000001C1, 47: 0x800000000021,
    48: 0x1000000000291, 49: 0x2000000000201, 50: 0x400000000001D,
    51: 0x800000000004B, 52: 0x10000000000009, 53: 0x20000000000047,
    54: 0x40000000000149, 55: 0x80000001000001, 56: 0x100000000000095,
    57: 0x200000000000081, 58: 0x400000000080001, 59: 0x800000000000095,
    60: 0x1000000000000003, 61: 0x2000000000000027,
    62: 0x4000000000000069, 63: 0x8000000000000003,
    64: 0x1000000000000001B,
}


class FieldError(ValueError):
    """Invalid field parameters or an undefined operation (e.g. 1/0)."""


# ---------------------------------------------------------------------------
# F_2[x] helpers on Python ints


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _polymod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, _polymod(a, b)
    return a


def _mulmod(a: int, b: int, f: int, m: int) -> int:
    r = 0
    top = 1 << m
    for i in range(b.bit_length() - 1, -1, -1):
        r <<= 1
        if r & top:
            r ^= f
        if (b >> i) & 1:
            r ^= a
    return r


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's irreducibility test for a polynomial over F_2."""
    m = f.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True

    def x_pow_2k(k):
        r = 2
        for _ in range(k):
            r = _mulmod(r, r, f, m)
        return r

    if x_pow_2k(m) != 2:
        return False
    for p in _prime_factors(m):
        h = x_pow_2k(m // p) ^ 2
        if _polygcd(f, h) != 1:
            return False
    return True


# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _log_tables(m: int, modulus: int):
    """Return (exp, log, generator) for F_{2^m}; exp has length 2^m - 1."""
    N = (1 << m) - 1
    factors = _prime_factors(N) if N > 1 else []

    def order_is_full(g):
        return all(_pow_scalar(g, N // p, modulus, m) != 1 for p in factors)

    g = 2
    while not order_is_full(g):
        g += 1

    exp = np.empty(N, dtype=np.uint32)
    exp[0] = 1
    length = 1
    nbytes = (m + 7) // 8
    while length < N:
        c = _pow_scalar(g, length, modulus, m)
        tables = []
        for j in range(nbytes):
            tables.append(np.array(
                [_mulmod(c, b << (8 * j), modulus, m) for b in range(256)],
                dtype=np.uint32))
        end = min(2 * length, N)
        src = exp[: end - length]
        acc = tables[0][src & 0xFF]
        for j in range(1, nbytes):
            acc ^= tables[j][(src >> (8 * j)) & 0xFF]
        exp[length:end] = acc
        length = end
    log = np.zeros(N + 1, dtype=np.int64)
    log[exp.astype(np.int64)] = np.arange(N, dtype=np.int64)
    exp.setflags(write=False)
    log.setflags(write=False)
    return exp, log, g


def _pow_scalar(a: int, e: int, f: int, m: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _mulmod(r, a, f, m)
        a = _mulmod(a, a, f, m)
        e >>= 1
    return r


class Field:
    """The field F_{q^m} with q = 2, defined by an irreducible modulus.

    >>> F = Field(3)            # x^3 + x + 1
    >>> F.mul(2, 4)             # x * x^2 = x + 1
    3
    """

    def __init__(self, m: int, modulus: int | None = None, q: int = 2):
        if q != 2:
            raise FieldError("only binary base fields (q = 2) are implemented")
        if not 1 <= m <= 64:
            raise FieldError(f"extension degree m={m} outside 1..64")
        if modulus is None:
            if m == 1:
                modulus = 0b11
            else:
                modulus = DEFAULT_MODULI[m]
        modulus = int(modulus)
        if modulus.bit_length() - 1 != m:
            raise FieldError(f"modulus 0x{modulus:x} does not have degree {m}")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus 0x{modulus:x} is reducible over F_2")
        self.q = q
        self.m = m
        self.modulus = modulus
        self.order = 1 << m
        self._low = modulus ^ (1 << m)
        self._mask = (1 << m) - 1
        self._N = self.order - 1
        if m <= TABLE_MAX_M:
            self._exp, self._log, self.generator = _log_tables(m, modulus)
        else:
            self._exp = self._log = None
            self.generator = None

    def __repr__(self):
        return f"Field(m={self.m}, modulus=0x{self.modulus:x})"

    def __eq__(self, other):
        return (isinstance(other, Field) and self.m == other.m
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.q, self.m, self.modulus))

    def __reduce__(self):
        return (Field, (self.m, self.modulus, self.q))

    # -- conversion ----------------------------------------------------

    def array(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.uint64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.uint64)

    def hex_width(self) -> int:
        return math.ceil(self.m * math.log2(self.q) / 4)

    def to_hex(self, x) -> str:
        return format(int(x), f"0{self.hex_width()}x")

    def from_hex(self, s: str) -> int:
        s = s.strip()
        if not s or len(s) > self.hex_width():
            raise FieldError(f"bad element encoding {s!r}")
        try:
            x = int(s, 16)
        except ValueError:
            raise FieldError(f"bad element encoding {s!r}") from None
        if x >> self.m:
            raise FieldError(f"element {s!r} does not fit in F_2^{self.m}")
        return x

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def add(x, y):
        return np.bitwise_xor(x, y) if _isarr(x, y) else x ^ y

    sub = add

    def mul(self, x, y):
        if not _isarr(x, y):
            x, y = int(x), int(y)
            if x == 0 or y == 0:
                return 0
            if self._log is not None:
                s = int(self._log[x]) + int(self._log[y])
                if s >= self._N:
                    s -= self._N
                return int(self._exp[s])
            return _mulmod(x, y, self.modulus, self.m)
        x = np.asarray(x, dtype=np.uint64)
        y = np.asarray(y, dtype=np.uint64)
        if self._log is not None:
            s = self._log[x] + self._log[y]
            s -= self._N * (s >= self._N)
            r = self._exp[s].astype(np.uint64)
            return np.where((x == 0) | (y == 0), np.uint64(0), r)
        return self._mul_shift(x, y)

    def _mul_shift(self, x, y):
        x, y = np.broadcast_arrays(x, y)
        acc = np.zeros(x.shape, dtype=np.uint64)
        low = np.uint64(self._low)
        top_shift = np.uint64(self.m - 1)
        one = np.uint64(1)
        mask = np.uint64(self._mask)
        for i in range(self.m - 1, -1, -1):
            top = (acc >> top_shift) & one
            acc = ((acc << one) & mask) ^ (top * low)
            acc ^= x * ((y >> np.uint64(i)) & one)
        return acc

    def square(self, x):
        return self.mul(x, x)

    def pow(self, x, e: int):
        """x**e for an integer exponent (negative allowed for x != 0)."""
        e = int(e)
        if e < 0:
            return self.pow(self.inv(x), -e)
        if not _isarr(x):
            x = int(x)
            if e == 0:
                return 1
            if x == 0:
                return 0
            if self._log is not None:
                return int(self._exp[(int(self._log[x]) * (e % self._N)) % self._N])
            return _pow_scalar(x, e, self.modulus, self.m)
        x = np.asarray(x, dtype=np.uint64)
        if e == 0:
            return np.ones(x.shape, dtype=np.uint64)
        if self._log is not None:
            r = self._exp[(self._log[x] * (e % self._N)) % self._N].astype(np.uint64)
            return np.where(x == 0, np.uint64(0), r)
        result = np.ones(x.shape, dtype=np.uint64)
        base = x.copy()
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x):
        if not _isarr(x):
            x = int(x)
            if x == 0:
                raise ZeroDivisionError("inverse of zero in F_2^m")
            if self._log is not None:
                return int(self._exp[(self._N - int(self._log[x])) % self._N])
            return _pow_scalar(x, self.order - 2, self.modulus, self.m)
        x = np.asarray(x, dtype=np.uint64)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of zero in F_2^m")
        if self._log is not None:
            return self._exp[(self._N - self._log[x]) % self._N].astype(np.uint64)
        return self.pow(x, self.order - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def frobenius(self, x, u: int):
        """x^(q^u); u is taken modulo m so negative powers invert the map."""
        u %= self.m
        if u == 0:
            return x if not _isarr(x) else np.array(x, dtype=np.uint64)
        if self._log is not None:
            k = pow(2, u, self._N) if self._N > 1 else 0
            if not _isarr(x):
                x = int(x)
                return 0 if x == 0 else int(self._exp[(int(self._log[x]) * k) % self._N])
            x = np.asarray(x, dtype=np.uint64)
            r = self._exp[(self._log[x] * k) % self._N].astype(np.uint64)
            return np.where(x == 0, np.uint64(0), r)
        for _ in range(u):
            x = self.mul(x, x)
        return x

    # -- F_q structure -------------------------------------------------

    def qary_expand(self, v) -> np.ndarray:
        """m x n matrix over F_2 whose column j holds the coordinates of v_j."""
        v = np.atleast_1d(np.asarray(v, dtype=np.uint64))
        shifts = np.arange(self.m, dtype=np.uint64)[:, None]
        return ((v[None, :] >> shifts) & np.uint64(1)).astype(np.uint8)

    def from_qary(self, M) -> np.ndarray:
        """Inverse of :meth:`qary_expand`."""
        M = np.asarray(M, dtype=np.uint64)
        weights = np.uint64(1) << np.arange(M.shape[0], dtype=np.uint64)
        return np.bitwise_or.reduce(M * weights[:, None], axis=0)

    @staticmethod
    def rank_q(v) -> int:
        """Rank weight: dimension over F_2 of the span of the entries of v."""
        basis: list[int] = []
        for x in np.ravel(np.asarray(v, dtype=np.uint64)).tolist():
            for b in basis:
                x = min(x, x ^ b)
            if x:
                basis.append(x)
                basis.sort(reverse=True)
        return len(basis)

    # -- sampling ------------------------------------------------------

    def random(self, rng: np.random.Generator, size=None):
        x = rng.integers(0, self._mask, size=size, dtype=np.uint64, endpoint=True)
        return int(x) if size is None else x

    def random_nonzero(self, rng: np.random.Generator) -> int:
        while True:
            x = self.random(rng)
            if x:
                return x

    def random_rank_vector(self, n: int, r: int, rng: np.random.Generator) -> np.ndarray:
        """Random vector of length n with rank weight exactly r."""
        if r < 0 or r > min(n, self.m):
            raise ValueError(f"rank {r} impossible for length {n} over F_2^{self.m}")
        if r == 0:
            return self.zeros(n)
        while True:
            basis = self.random(rng, r)
            if self.rank_q(basis) != r:
                continue
            coeffs = rng.integers(0, 2, size=(r, n), dtype=np.uint8)
            v = np.bitwise_xor.reduce(
                np.where(coeffs.astype(bool), basis[:, None], np.uint64(0)), axis=0)
            if self.rank_q(v) == r:
                return v.astype(np.uint64)


def _isarr(*xs) -> bool:
    return any(isinstance(x, np.ndarray) for x in xs)

"""Line-oriented text formats for keys, ciphertexts, messages and configs.

Every file starts with a header::

    LOIDREAU <kind> 1
    q 2
    m 24
    n 24
    k 18
    lambda 3
    modulus 0x100001b

followed by named blocks ``<name> <rows> <cols>`` whose rows are
whitespace-separated hex field elements, and a final ``end`` line.
Vectors are blocks with a single row.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .attack import EquivalentKey
from .gf import Field
from .scheme import Params, PublicKey, SecretKey

MAGIC = "LOIDREAU"
VERSION = 1
KINDS = ("PK", "SK", "EK", "CT", "MSG", "CODE")


class FormatError(ValueError):
    def __init__(self, msg, line=None, field_name=None):
        where = f"line {line}: " if line is not None else ""
        if field_name:
            where += f"{field_name}: "
        super().__init__(where + msg)
        self.line = line
        self.field_name = field_name


def _header(kind, F: Field, p: Params) -> list[str]:
    return [f"{MAGIC} {kind} {VERSION}", f"q {p.q}", f"m {p.m}", f"n {p.n}", f"k {p.k}",
            f"lambda {p.lam}", f"modulus 0x{F.modulus:x}"]


def dumps(kind: str, F: Field, p: Params, blocks: dict) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind}")
    width = F.hex_width()
    lines = _header(kind, F, p)
    for name, arr in blocks.items():
        a = np.asarray(arr, dtype=np.uint64)
        a2 = a.reshape(1, -1) if a.ndim == 1 else a
        lines.append(f"{name} {a2.shape[0]} {a2.shape[1]}")
        for row in a2:
            lines.append(" ".join(f"{int(v):0{width}x}" for v in row))
    lines.append("end")
    return "\n".join(lines) + "\n"


def loads(text: str, expect: str | None = None):
    """Parse a file; returns (kind, Field, Params, blocks)."""
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file", 1)
    head = lines[0].split()
    if len(head) != 3 or head[0] != MAGIC:
        raise FormatError("missing LOIDREAU header", 1)
    kind = head[1]
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind}", 1, "kind")
    if expect is not None and kind != expect:
        raise FormatError(f"expected a {expect} file, got {kind}", 1, "kind")
    if head[2] != str(VERSION):
        raise FormatError(f"unsupported version {head[2]}", 1, "version")
    hdr = {}
    names = ("q", "m", "n", "k", "lambda", "modulus")
    for i, name in enumerate(names, start=2):
        if i > len(lines):
            raise FormatError("truncated header", i, name)
        parts = lines[i - 1].split()
        if len(parts) != 2 or parts[0] != name:
            raise FormatError(f"expected '{name} <value>'", i, name)
        try:
            hdr[name] = int(parts[1], 0)
        except ValueError:
            raise FormatError(f"bad value {parts[1]!r}", i, name) from None
    try:
        F = Field(hdr["m"], hdr["modulus"], q=hdr["q"])
        p = Params(hdr["q"], hdr["m"], hdr["n"], hdr["k"], hdr["lambda"])
    except (ValueError, NotImplementedError) as exc:
        raise FormatError(str(exc), None, "header") from None
    blocks = {}
    i = len(names) + 1
    while True:
        if i >= len(lines):
            raise FormatError("missing 'end' line", i + 1)
        line = lines[i].strip()
        i += 1
        if line == "end":
            break
        parts = line.split()
        if len(parts) != 3:
            raise FormatError("expected '<name> <rows> <cols>'", i)
        name = parts[0]
        try:
            r, c = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError("bad block shape", i, name) from None
        rows = []
        for _ in range(r):
            if i >= len(lines):
                raise FormatError("truncated block", i + 1, name)
            toks = lines[i].split()
            i += 1
            if len(toks) != c:
                raise FormatError(f"expected {c} entries, got {len(toks)}", i, name)
            try:
                vals = [int(t, 16) for t in toks]
            except ValueError:
                raise FormatError("non-hex entry", i, name) from None
            if any(v > F.order - 1 for v in vals):
                raise FormatError("entry outside the field", i, name)
            rows.append(vals)
        blocks[name] = np.array(rows, dtype=np.uint64).reshape(r, c)
    return kind, F, p, blocks


def _need(blocks, name, shape):
    if name not in blocks:
        raise FormatError(f"missing block {name}", None, name)
    a = blocks[name]
    if a.shape != shape:
        raise FormatError(f"shape {a.shape}, expected {shape}", None, name)
    return a


# -- typed wrappers --------------------------------------------------------


def dump_public_key(pk: PublicKey) -> str:
    return dumps("PK", pk.field, pk.params, {"G_pub": pk.G_pub})


def load_public_key(text: str) -> PublicKey:
    _, F, p, b = loads(text, "PK")
    return PublicKey(F, p, _need(b, "G_pub", (p.k, p.n)).copy())


def dump_secret_key(sk: SecretKey) -> str:
    blocks = {"g": sk.g, "beta": sk.beta}
    for j, part in enumerate(sk.P_parts):
        blocks[f"P{j}"] = part
    return dumps("SK", sk.field, sk.params, blocks)


def load_secret_key(text: str) -> SecretKey:
    _, F, p, b = loads(text, "SK")
    g = _need(b, "g", (1, p.n))[0]
    beta = _need(b, "beta", (1, p.lam - 1))[0]
    parts = np.stack([_need(b, f"P{j}", (p.n, p.n)) for j in range(p.lam)])
    if parts.max(initial=0) > 1:
        raise FormatError("masking parts must be binary", None, "P")
    return SecretKey(F, p, g.copy(), beta.copy(), parts.astype(np.uint8))


def dump_equivalent_key(ek: EquivalentKey, p: Params) -> str:
    return dumps("EK", ek.field, p, {"P_prime": ek.P_prime, "b": ek.b, "G_masked": ek.G_masked,
                                     "beta": ek.beta})


def load_equivalent_key(text: str) -> tuple[EquivalentKey, Params]:
    _, F, p, b = loads(text, "EK")
    ek = EquivalentKey(F, _need(b, "P_prime", (p.n, p.n)).copy(), _need(b, "b", (1, p.n))[0].copy(),
                       p.k, p.t, _need(b, "G_masked", (p.k, p.n)).copy(),
                       _need(b, "beta", (1, p.lam - 1))[0].copy())
    return ek, p


def dump_vector(kind: str, F: Field, p: Params, name: str, v) -> str:
    return dumps(kind, F, p, {name: np.asarray(v, dtype=np.uint64)})


def load_vector(text: str, kind: str, name: str, length_attr: str):
    _, F, p, b = loads(text, kind)
    return _need(b, name, (1, getattr(p, length_attr)))[0].copy(), F, p


def dump_ciphertext(F: Field, p: Params, c) -> str:
    return dump_vector("CT", F, p, "c", c)


def load_ciphertext(text: str):
    return load_vector(text, "CT", "c", "n")


def dump_message(F: Field, p: Params, m) -> str:
    return dump_vector("MSG", F, p, "msg", m)


def load_message(text: str):
    return load_vector(text, "MSG", "msg", "k")


def dump_code(F: Field, p: Params, G) -> str:
    return dumps("CODE", F, p, {"G": G})


def load_code(text: str):
    _, F, p, b = loads(text, "CODE")
    if "G" not in b:
        raise FormatError("missing block G", None, "G")
    return b["G"], F, p


# -- byte codec ------------------------------------------------------------


def symbol_bytes(F: Field) -> int:
    w = F.m // 8
    if w < 1:
        raise ValueError("field too small to carry a byte per symbol")
    return w


def bytes_to_messages(data: bytes, F: Field, k: int) -> np.ndarray:
    """Pack bytes into (blocks, k) symbol messages with 0x80-then-zeros padding."""
    w = symbol_bytes(F)
    block = w * k
    padded = data + b"\x80"
    padded += b"\x00" * (-len(padded) % block)
    arr = np.frombuffer(padded, dtype=np.uint8).reshape(-1, w).astype(np.uint64)
    shifts = np.arange(w - 1, -1, -1, dtype=np.uint64) * np.uint64(8)
    syms = np.bitwise_or.reduce(arr << shifts, axis=1)
    return syms.reshape(-1, k)


def messages_to_bytes(msgs, F: Field) -> bytes:
    w = symbol_bytes(F)
    syms = np.asarray(msgs, dtype=np.uint64).reshape(-1)
    if np.any(syms >> np.uint64(8 * w)):
        raise ValueError("symbol does not fit the byte codec")
    shifts = np.arange(w - 1, -1, -1, dtype=np.uint64) * np.uint64(8)
    raw = ((syms[:, None] >> shifts) & np.uint64(0xFF)).astype(np.uint8).tobytes()
    end = raw.rfind(b"\x80")
    if end < 0 or raw[end + 1:].strip(b"\x00"):
        raise ValueError("missing padding marker")
    return raw[:end]


# -- configuration ---------------------------------------------------------


@dataclass
class Config:
    params: str = "2,24,24,18,3"
    modulus: int | None = None
    seed: int = 0
    out: str = "out"
    trials: int = 20
    enforce_assumptions: bool = True
    workers: int = 1
    verify_ciphertexts: int = 5
    random_controls: bool = True
    extra: dict = field(default_factory=dict)

    def parsed_params(self) -> Params:
        return Params.parse(self.params)

    def to_json(self) -> str:
        d = asdict(self)
        d["modulus"] = None if self.modulus is None else f"0x{self.modulus:x}"
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Config":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        if not isinstance(d, dict):
            raise FormatError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise FormatError(f"unknown keys {sorted(unknown)}", None, "config")
        if isinstance(d.get("modulus"), str):
            d["modulus"] = int(d["modulus"], 0)
        cfg = cls(**d)
        cfg.parsed_params()
        return cfg

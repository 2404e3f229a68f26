"""Command-line front end.

Exit codes: 0 success, 1 attack or decoding failure, 2 input error,
3 assumption violation.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import warnings

import numpy as np

from . import serialize as ser
from .attack import AssumptionViolation, AttackError, attack_decrypt, full_attack
from .distinguisher import DistinguisherRow, distinguish, in_regime, loidreau_bound
from .experiment import TRIAL_FIELDS, aggregate, run_experiment, write_csv
from .gabidulin import DecodingFailure
from .gf import Field
from .linalg import Subspace
from .scheme import KeygenError, Params, decrypt, encrypt, keygen
from .seeding import stage_rng

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ASSUMPTION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def _params(args) -> Params:
    try:
        return Params.parse(args.params)
    except ValueError as exc:
        raise InputError(f"--params: {exc}") from None


def _field(args, p: Params) -> Field:
    modulus = int(args.modulus, 16) if args.modulus else None
    try:
        return Field(p.m, modulus)
    except ValueError as exc:
        raise InputError(f"--modulus: {exc}") from None


def cmd_keygen(args):
    p = _params(args)
    F = _field(args, p)
    rng = stage_rng(args.seed, 0, "keygen")
    try:
        pk, sk = keygen(p, rng, args.enforce_assumptions, field=F)
    except KeygenError as exc:
        print(f"keygen: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    _write(os.path.join(args.out, "pk.key"), ser.dump_public_key(pk))
    _write(os.path.join(args.out, "sk.key"), ser.dump_secret_key(sk))
    print(f"wrote {args.out}/pk.key and {args.out}/sk.key ({p})")
    return EXIT_OK


def cmd_encrypt(args):
    pk = ser.load_public_key(_read(args.pk))
    F, p = pk.field, pk.params
    rng = stage_rng(args.seed, 0, "encrypt")
    if args.msg:
        msg, _, mp = ser.load_message(_read(args.msg))
        if mp.k != p.k:
            raise InputError("message length does not match the key")
        msgs = msg[None]
    elif args.text is not None:
        msgs = ser.bytes_to_messages(args.text.encode(), F, p.k)
    else:
        msgs = F.random(rng, p.k)[None]
    texts = [ser.dump_ciphertext(F, p, encrypt(pk, m, rng)) for m in msgs]
    _write(args.out, "".join(texts))
    print(f"wrote {len(texts)} ciphertext block(s) to {args.out}")
    return EXIT_OK


def _split_blocks(text):
    blocks, cur = [], []
    for line in text.splitlines(keepends=True):
        cur.append(line)
        if line.strip() == "end":
            blocks.append("".join(cur))
            cur = []
    if "".join(cur).strip():
        blocks.append("".join(cur))
    return blocks


def cmd_decrypt(args):
    if bool(args.sk) == bool(args.ek):
        raise InputError("give exactly one of --sk or --ek")
    if args.sk:
        sk = ser.load_secret_key(_read(args.sk))
        F, p = sk.field, sk.params
        dec = lambda c: decrypt(sk, c)
    else:
        ek, p = ser.load_equivalent_key(_read(args.ek))
        F = ek.field
        dec = lambda c: attack_decrypt(ek, c)
    msgs = []
    for block in _split_blocks(_read(args.ct)):
        c, _, cp = ser.load_ciphertext(block)
        if cp.as_tuple() != p.as_tuple():
            raise InputError("ciphertext parameters do not match the key")
        try:
            msgs.append(dec(c))
        except DecodingFailure as exc:
            print(f"decrypt: decoding failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
    if args.text:
        sys.stdout.write(ser.messages_to_bytes(np.stack(msgs), F).decode(errors="replace") + "\n")
    if args.out:
        _write(args.out, "".join(ser.dump_message(F, p, m) for m in msgs))
    elif not args.text:
        sys.stdout.write("".join(ser.dump_message(F, p, m) for m in msgs))
    return EXIT_OK


def cmd_distinguish(args):
    text = _read(args.code)
    kind = text.split(None, 2)[1] if len(text.split()) > 1 else ""
    if kind == "PK":
        pk = ser.load_public_key(text)
        G, F, p = pk.G_pub, pk.field, pk.params
    else:
        G, F, p = ser.load_code(text)
    lam = args.lam or p.lam
    C = Subspace(F, G)
    C_dual = C.dual()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        verdict, dim = distinguish(C_dual, lam, C.dim)
    row = DistinguisherRow("", (p.q, p.m, p.n, C.dim, lam), dim,
                           loidreau_bound(p.n, C.dim, lam), verdict)
    w = csv.writer(sys.stdout)
    w.writerow(DistinguisherRow.HEADER + ("in_regime",))
    w.writerow(row.as_row() + [int(in_regime(p.n, C.dim, lam))])
    return EXIT_OK


def cmd_attack(args):
    pk = ser.load_public_key(_read(args.pk))
    lam = args.lam or pk.params.lam
    rng = stage_rng(args.seed, 0, "attack")
    os.makedirs(args.out, exist_ok=True)
    try:
        ek, tr = full_attack(pk, lam, rng)
    except AttackError as exc:
        if exc.transcript is not None:
            _write(os.path.join(args.out, "transcript.txt"), exc.transcript.to_text())
        print(f"attack failed: {exc}", file=sys.stderr)
        if exc.details.get("stabilizer_relation"):
            print(f"stabilizer relation: {exc.details['stabilizer_relation']}", file=sys.stderr)
        return EXIT_ASSUMPTION if isinstance(exc, AssumptionViolation) else EXIT_FAIL
    _write(os.path.join(args.out, "ek.key"), ser.dump_equivalent_key(ek, pk.params))
    _write(os.path.join(args.out, "transcript.txt"), tr.to_text())
    _write(os.path.join(args.out, "timings.txt"),
           "".join(f"{k} {v:.6f}\n" for k, v in tr.timings.items()))
    print(f"recovered equivalent key in {tr.timings.get('total', 0):.2f} s; wrote {args.out}/ek.key")
    return EXIT_OK


def cmd_experiment(args):
    if args.config:
        cfg = ser.Config.from_json(_read(args.config))
    else:
        cfg = ser.Config()
    if args.params:
        cfg.params = args.params
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trials is not None:
        cfg.trials = args.trials
    if args.out:
        cfg.out = args.out
    if args.modulus:
        cfg.modulus = int(args.modulus, 16)
    if args.enforce_assumptions is not None:
        cfg.enforce_assumptions = args.enforce_assumptions
    if args.workers is not None:
        cfg.workers = args.workers
    try:
        cfg.parsed_params()
    except ValueError as exc:
        raise InputError(f"params: {exc}") from None
    rows = run_experiment(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    write_csv(os.path.join(cfg.out, "trials.csv"), rows, TRIAL_FIELDS)
    agg = aggregate(rows, cfg)
    write_csv(os.path.join(cfg.out, "aggregate.csv"), [agg])
    _write(os.path.join(cfg.out, "config.json"), cfg.to_json())
    for k, v in agg.items():
        print(f"{k}: {v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loidreau", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp, params=True):
        sp.add_argument("--seed", type=int, default=0)
        if params:
            sp.add_argument("--params", default="2,24,24,18,3", help="q,m,n,k,lambda")
            sp.add_argument("--modulus", help="field modulus in hex")

    sp = sub.add_parser("keygen", help="generate a key pair")
    common(sp)
    sp.add_argument("--enforce-assumptions", action="store_true")
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("encrypt", help="encrypt a message file, text, or a random message")
    common(sp, params=False)
    sp.add_argument("--pk", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--msg", help="message file")
    g.add_argument("--text", help="UTF-8 text, packed with the byte codec")
    sp.add_argument("--out", default="ct.txt")
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("decrypt", help="decrypt with a secret or an equivalent key")
    sp.add_argument("--sk")
    sp.add_argument("--ek")
    sp.add_argument("--ct", required=True)
    sp.add_argument("--out")
    sp.add_argument("--text", action="store_true", help="print as text via the byte codec")
    sp.set_defaults(func=cmd_decrypt)

    sp = sub.add_parser("distinguish", help="Frobenius-sum dimension of a code's dual")
    sp.add_argument("--code", required=True, help="PK or CODE file")
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.set_defaults(func=cmd_distinguish)

    sp = sub.add_parser("attack", help="recover an equivalent key from a public key")
    common(sp, params=False)
    sp.add_argument("--pk", required=True)
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--out", default="attack_out")
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("experiment", help="seeded batch of keygen/distinguish/attack/verify")
    sp.add_argument("--config", help="JSON config file")
    sp.add_argument("--params")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--modulus")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out")
    sp.add_argument("--enforce-assumptions", dest="enforce_assumptions", action="store_true",
                    default=None)
    sp.add_argument("--no-enforce-assumptions", dest="enforce_assumptions", action="store_false")
    sp.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ser.FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

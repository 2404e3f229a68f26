import numpy as np
import pytest
from hypothesis import given, strategies as st

from loidreau import serialize as ser
from loidreau.cli import main
from loidreau.experiment import aggregate, run_experiment
from loidreau.gf import Field
from loidreau.scheme import keygen

from conftest import P2


def test_key_files_round_trip(rng):
    pk, sk = keygen(P2, rng)
    pk2 = ser.load_public_key(ser.dump_public_key(pk))
    assert np.array_equal(pk2.G_pub, pk.G_pub) and pk2.field == pk.field
    sk2 = ser.load_secret_key(ser.dump_secret_key(sk))
    assert np.array_equal(sk2.g, sk.g) and np.array_equal(sk2.P_parts, sk.P_parts)
    assert np.array_equal(sk2.beta, sk.beta)


def test_vector_files_round_trip(F20, rng):
    c = F20.random(rng, P2.n)
    got, F, p = ser.load_ciphertext(ser.dump_ciphertext(F20, P2, c))
    assert np.array_equal(got, c) and p == P2


@pytest.mark.parametrize("mutate,field", [
    (lambda t: t.replace("LOIDREAU", "LOIDRAEU", 1), None),
    (lambda t: t.replace("\nend\n", "\n"), None),
    (lambda t: t.replace("c 1 20", "c 1 21"), "c"),
    (lambda t: t[:-12] + "zz" + t[-10:], "c"),
    (lambda t: t.replace("m 20", "m twenty"), "m"),
])
def test_malformed_files(F20, rng, mutate, field):
    text = ser.dump_ciphertext(F20, P2, F20.random(rng, P2.n))
    with pytest.raises(ser.FormatError) as info:
        ser.load_ciphertext(mutate(text))
    if field:
        assert info.value.field_name == field


def test_wrong_kind_rejected(F20, rng):
    text = ser.dump_message(F20, P2, F20.random(rng, P2.k))
    with pytest.raises(ser.FormatError):
        ser.load_ciphertext(text)


@given(st.binary(max_size=200))
def test_byte_codec_round_trip(data):
    F = Field(24)
    msgs = ser.bytes_to_messages(data, F, 18)
    assert msgs.shape[1] == 18
    assert ser.messages_to_bytes(msgs, F) == data


def test_config_round_trip():
    cfg = ser.Config(params="2,20,20,14,2", modulus=0x100009, seed=2**63 + 5, trials=3)
    assert ser.Config.from_json(cfg.to_json()) == cfg
    with pytest.raises(ser.FormatError):
        ser.Config.from_json('{"bogus": 1}')


def _run(args):
    return main([str(a) for a in args])


def test_cli_round_trip_and_attack(tmp_path, capsys):
    d = tmp_path
    assert _run(["keygen", "--params", "2,20,20,14,2", "--seed", 4, "--enforce-assumptions",
                 "--out", d / "k"]) == 0
    first = (d / "k" / "pk.key").read_text()
    assert _run(["keygen", "--params", "2,20,20,14,2", "--seed", 4, "--enforce-assumptions",
                 "--out", d / "k2"]) == 0
    assert (d / "k2" / "pk.key").read_text() == first
    assert _run(["encrypt", "--pk", d / "k" / "pk.key", "--text", "attack at dawn",
                 "--out", d / "ct.txt"]) == 0
    capsys.readouterr()
    assert _run(["decrypt", "--sk", d / "k" / "sk.key", "--ct", d / "ct.txt", "--text"]) == 0
    assert "attack at dawn" in capsys.readouterr().out
    assert _run(["attack", "--pk", d / "k" / "pk.key", "--out", d / "atk"]) == 0
    assert (d / "atk" / "transcript.txt").read_text().startswith("# loidreau attack transcript")
    capsys.readouterr()
    assert _run(["decrypt", "--ek", d / "atk" / "ek.key", "--ct", d / "ct.txt", "--text"]) == 0
    assert "attack at dawn" in capsys.readouterr().out
    assert _run(["distinguish", "--code", d / "k" / "pk.key"]) == 0
    assert "loidreau-like" in capsys.readouterr().out


def test_cli_input_errors(tmp_path):
    assert _run(["keygen", "--params", "2,20,20", "--out", tmp_path]) == 2
    assert _run(["decrypt", "--sk", tmp_path / "missing", "--ct", tmp_path / "x"]) == 2
    _run(["keygen", "--params", "2,20,20,14,2", "--out", tmp_path])
    _run(["encrypt", "--pk", tmp_path / "pk.key", "--out", tmp_path / "ct.txt"])
    ct = (tmp_path / "ct.txt").read_text().splitlines()
    ct[8] = "g" + ct[8][1:]
    (tmp_path / "bad.txt").write_text("\n".join(ct) + "\n")
    assert _run(["decrypt", "--sk", tmp_path / "sk.key", "--ct", tmp_path / "bad.txt"]) == 2


def test_cli_decoding_failure_exit_code(tmp_path, rng):
    _run(["keygen", "--params", "2,20,20,14,2", "--out", tmp_path])
    pk = ser.load_public_key((tmp_path / "pk.key").read_text())
    F = pk.field
    c = F.random(rng, P2.n)       # far from the code
    (tmp_path / "ct.txt").write_text(ser.dump_ciphertext(F, P2, c))
    assert _run(["decrypt", "--sk", tmp_path / "sk.key", "--ct", tmp_path / "ct.txt"]) == 1


def test_attack_exit_code_on_random_key(tmp_path, rng):
    from loidreau.scheme import PublicKey
    F = Field(20)
    pk = PublicKey(F, P2, F.random(rng, (P2.k, P2.n)))
    (tmp_path / "pk.key").write_text(ser.dump_public_key(pk))
    assert _run(["attack", "--pk", tmp_path / "pk.key", "--out", tmp_path / "a"]) == 3


def test_experiment(tmp_path):
    assert _run(["experiment", "--params", "2,20,20,14,2", "--trials", 3, "--seed", 1,
                 "--out", tmp_path]) == 0
    agg = (tmp_path / "aggregate.csv").read_text().splitlines()
    assert len(agg) == 2
    rows = (tmp_path / "trials.csv").read_text().splitlines()
    assert len(rows) == 4


def test_experiment_deterministic_and_ordered():
    cfg = ser.Config(params="2,20,20,14,2", trials=4, seed=3)
    a = run_experiment(cfg)
    cfg.workers = 2
    b = run_experiment(cfg)
    strip = lambda rows: [{k: v for k, v in r.items() if not k.startswith("time")} for r in rows]
    assert strip(a) == strip(b)
    assert [r["trial"] for r in b] == [0, 1, 2, 3]
    agg = aggregate(a, cfg)
    assert agg["attack_ok"] == 4 and agg["loidreau_like"] == 4

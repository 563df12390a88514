import json
from pathlib import Path

import numpy as np
import pytest

from qdchannels import io
from qdchannels.channel import IsotropicParams, Branch, action_residual, make_isotropic
from qdchannels.cli import cli_main
from qdchannels.discord import BipartiteState
from qdchannels.errors import ParseError
from qdchannels import samplers

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
EXPECTED = json.loads((FIXTURES / "expected.json").read_text())


def run_cli(capsys, *argv):
    code = cli_main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# --- io ----------------------------------------------------------------------


def test_channel_json_round_trip_is_exact(tmp_path):
    ch = samplers.sample_random_channel(3, 2, 0)
    path = tmp_path / "c.json"
    io.write_json(path, io.channel_to_dict(ch))
    back = io.read_channel(path)
    for a, b in zip(ch.kraus, back.kraus):
        assert np.array_equal(a, b)


def test_state_json_round_trip_is_exact(tmp_path):
    s = samplers.sample_random_state(2, 3, 1)
    path = tmp_path / "s.json"
    io.write_json(path, io.state_to_dict(s))
    back = io.read_state(path)
    assert back.dims == (2, 3) and np.array_equal(back.rho, s.rho)


def test_schema_layout():
    d = io.channel_to_dict(make_isotropic(IsotropicParams(np.eye(2), 0.5)))
    assert d["dim"] == 2
    assert np.array(d["kraus"]).shape[1:] == (2, 2, 2)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        io.loads('{"dim": 2,\n "kraus": [1, 2,]\n}')
    assert exc.value.line == 2 and exc.value.offset is not None


@pytest.mark.parametrize("doc", [
    {"kraus": []},
    {"dim": 2, "kraus": []},
    {"dim": "2", "kraus": [[[[1, 0]]]]},
    {"dim": 2, "kraus": [[[[1, 0], [0, 0]]]]},
    {"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "x"]},
])
def test_bad_channel_documents(doc):
    with pytest.raises(ParseError):
        io.channel_from_dict(doc)


@pytest.mark.parametrize("doc", [
    {"rho": []},
    {"dims": [2], "rho": []},
    {"dims": [2, 2], "rho": [[[1, 0]]]},
])
def test_bad_state_documents(doc):
    with pytest.raises(ParseError):
        io.state_from_dict(doc)


# --- cli -----------------------------------------------------------------


@pytest.mark.parametrize("name,verdict", sorted(EXPECTED["classify"].items()))
def test_fixture_verdicts(capsys, name, verdict):
    code, out, err = run_cli(capsys, "classify", FIXTURES / name)
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["verdict"] == verdict
    if verdict == "CreatesDiscord":
        assert doc["witness"]["residual"] > 1e-6
        io.state_from_dict(doc["witness"]["state"])
    else:
        assert doc["residual"] < 1e-8 and doc["params"] is not None


@pytest.mark.parametrize("name,expected", sorted(EXPECTED["zeroqd"].items()))
def test_fixture_zeroqd(capsys, name, expected):
    code, out, _ = run_cli(capsys, "zeroqd", FIXTURES / name)
    assert code == 0
    doc = json.loads(out)
    assert doc["zero_discord"] is expected["zero_discord"]
    assert doc["witness"] == expected["witness"]


def test_isotropic_fixture_was_built_by_constructor(capsys):
    _, out, _ = run_cli(capsys, "classify", FIXTURES / "isotropic_n3.json")
    p = json.loads(out)["params"]
    params = IsotropicParams(io.matrix_from_json(p["u"]), p["t"], Branch(p["branch"]))
    assert action_residual(io.read_channel(FIXTURES / "isotropic_n3.json"),
                           make_isotropic(params), 3) < 1e-9


def test_discord_cli(capsys):
    code, out, _ = run_cli(capsys, "discord", FIXTURES / "bell.json")
    assert code == 0 and abs(json.loads(out)["discord"] - 1) < 1e-4
    code, out, _ = run_cli(capsys, "--format", "text", "discord", "--swap-parties", FIXTURES / "bell.json")
    assert code == 0 and "party: A" in out


def test_verify_cli(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "verify", "T3", "--trials", 200, "--dims", "2,2", "--seed", 7,
                           "--out-dir", tmp_path)
    doc = json.loads(out)
    assert code == 0 and doc["passes"] == 200 and doc["failures"] == []


def test_verify_cli_failure_exit_code(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "verify", "T3", "--trials", 3, "--dims", "2,2", "--tol", -1,
                           "--out-dir", tmp_path)
    doc = json.loads(out)
    assert code == 1 and len(doc["failures"]) == 3
    payload = doc["failures"][0]["payload"]
    code, out, _ = run_cli(capsys, "zeroqd", payload)
    assert code == 0 and json.loads(out)["zero_discord"] is True
    code, out, _ = run_cli(capsys, "classify", payload)
    assert code == 0 and json.loads(out)["verdict"] == "CompletelyDecohering"


def test_input_errors_exit_two(capsys, tmp_path):
    code, out, err = run_cli(capsys, "classify", FIXTURES / "broken.json")
    assert code == 2 and out == "" and "line 2" in err
    code, _, err = run_cli(capsys, "zeroqd", tmp_path / "missing.json")
    assert code == 2 and err
    code, _, _ = run_cli(capsys, "nonsense")
    assert code == 2
    code, _, err = run_cli(capsys, "verify", "T1_FWD", "--dims", "2,2")
    assert code == 2 and "n >= 3" in err
    code, _, _ = run_cli(capsys, "verify", "T3", "--dims", "2x2")
    assert code == 2
    bad = tmp_path / "bad_state.json"
    io.write_json(bad, io.state_to_dict(BipartiteState((2, 2), np.eye(4))))
    code, _, err = run_cli(capsys, "discord", bad)
    assert code == 2 and "trace" in err


def test_global_flags_before_or_after(capsys):
    _, a, _ = run_cli(capsys, "--format", "text", "zeroqd", FIXTURES / "bell.json")
    _, b, _ = run_cli(capsys, "zeroqd", FIXTURES / "bell.json", "--format", "text")
    assert a == b and a.startswith("zero_discord: False")


@pytest.mark.parametrize("argv", [
    ("sample", "state", "--dims", "2,3", "--seed", 9),
    ("sample", "zeroqd-state", "--seed", 9),
    ("sample", "channel", "--n", 3, "--rank", 2, "--seed", 9),
    ("sample", "isotropic", "--n", 3, "--seed", 9),
    ("sample", "decohering", "--n", 3, "--seed", 9),
    ("sample", "qubit-cpu", "--seed", 9),
    ("verify", "OBS3", "--trials", 20, "--seed", 9),
    ("classify", FIXTURES / "amplitude_damping.json", "--seed", 9),
])
def test_byte_identical_output(capsys, argv):
    _, a, _ = run_cli(capsys, *argv)
    _, b, _ = run_cli(capsys, *argv)
    assert a and a == b


def test_sample_outputs_are_valid(capsys, tmp_path):
    out = tmp_path / "iso.json"
    code, stdout, _ = run_cli(capsys, "sample", "isotropic", "--n", 3, "--t", -0.3,
                              "--branch", "Transpose", "--out", out)
    assert code == 0 and stdout == ""
    code, cls, _ = run_cli(capsys, "classify", out)
    doc = json.loads(cls)
    assert doc["verdict"] == "NontrivialIsotropic" and abs(doc["params"]["t"] + 0.3) < 1e-9
    code, _, err = run_cli(capsys, "sample", "isotropic", "--n", 3, "--t", 0.9, "--branch", "Transpose")
    assert code == 2 and "range" in err


def test_bloch_map_cli(capsys, tmp_path):
    csv_path = tmp_path / "m.csv"
    code, out, _ = run_cli(capsys, "bloch-map", FIXTURES / "qubit_cpu.json", "--emit-csv", csv_path)
    doc = json.loads(out)
    assert code == 0 and doc["rank"] == 3 and doc["csv_rows"] == 400
    assert csv_path.read_text().splitlines()[0] == "x,y,z,xp,yp,zp"
    code, _, err = run_cli(capsys, "bloch-map", FIXTURES / "isotropic_n3.json")
    assert code == 2 and "qubit" in err

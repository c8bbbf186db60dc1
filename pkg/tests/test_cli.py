import json
import logging

import pytest

from adversim.cli import main
from adversim.config import BUDGET_ENV, Config, parse_params
from adversim.errors import UsageError
from adversim.protocols import simulate_rwwf


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_simulate_snapshot(capsys):
    code, out = _run(capsys, "simulate", "--protocol", "snapshot", "--n", "3", "--seed", "1")
    assert code == 0
    trace = json.loads(out)
    assert trace["protocol"] == "snapshot"
    assert len(trace["rounds"]) == 3
    assert all(o is not None for o in trace["outputs"])
    assert "violations" not in trace


def test_simulate_is_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["simulate", "--protocol", "gossip", "--spec", "tp", "--n", "4", "--seed", "9"]
    assert main(argv + ["--out", str(first)]) == 0
    assert main(argv + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_simulate_dump_states(capsys):
    code, out = _run(capsys, "simulate", "--n", "2", "--rounds", "1", "--dump-states")
    assert code == 0
    assert "states" in json.loads(out)["rounds"][0]


def test_simulate_rejects_bad_processor_count(capsys):
    assert main(["simulate", "--n", "0"]) == 64
    assert main(["simulate", "--spec", "kcc"]) == 64


def test_exhaustive_snapshot(capsys):
    code, out = _run(capsys, "exhaustive", "--property", "snapshot-valid", "--n", "2")
    assert code == 0
    report = json.loads(out)
    assert report["mode"] == "exhaustive"
    assert report["holds"] is True
    assert report["executions"] == 9


def test_exhaustive_unknown_property(capsys):
    assert main(["exhaustive", "--property", "snapshot-vaild"]) == 64


def test_exhaustive_pairs_translation_needs_a_pair_adversary(capsys):
    assert main(["exhaustive", "--property", "pairs-translation", "--spec", "tp"]) == 64


def test_exhaustive_falls_back_to_samples(capsys, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "100")
    code, out = _run(
        capsys,
        "exhaustive",
        "--property",
        "tournament-emulation",
        "--spec",
        "tp",
        "--rounds",
        "5",
        "--fallback-samples",
        "20",
    )
    assert code == 0
    report = json.loads(out)
    assert report["mode"] == "sampled"
    assert report["cap"] == 100
    assert report["samples"] == 20
    assert report["holds"] is True


def test_exhaustive_over_budget_without_fallback(capsys, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "100")
    code, out = _run(
        capsys, "exhaustive", "--property", "snapshot-valid", "--n", "3", "--fallback-samples", "0"
    )
    assert code == 3
    error = json.loads(out)
    assert error["error"] == "budget"
    assert error["cap"] == 100


def test_complex_exports(capsys, tmp_path):
    svg, doc = tmp_path / "c.svg", tmp_path / "c.json"
    code, out = _run(capsys, "complex", "--n", "3", "--svg", str(svg), "--json", str(doc), "--cross-validate")
    assert code == 0
    summary = json.loads(out)
    assert summary["tops"] == 27
    assert summary["chromatic"] and summary["sperner"]
    assert summary["cross_validation"]["ok"] is True
    assert svg.read_bytes().startswith(b"<?xml")
    assert len(json.loads(doc.read_text())["tops"]) == 27


def test_complex_svg_needs_three_processors(tmp_path):
    assert main(["complex", "--n", "5", "--svg", str(tmp_path / "c.svg")]) == 65


def test_complex_for_two_processors(capsys):
    code, out = _run(capsys, "complex", "--n", "2")
    assert code == 0
    assert json.loads(out)["tops"] == 3


def test_verify_replays_a_trace(capsys, tmp_path):
    path = tmp_path / "trace.json"
    assert main(["simulate", "--protocol", "gossip", "--spec", "tp", "--seed", "2", "--out", str(path)]) == 0
    code, out = _run(capsys, "verify", str(path))
    assert code == 0
    [report] = json.loads(out)
    assert report["digests_match"] is True
    assert report["passed"] is True


def test_verify_detects_a_tampered_digest(capsys, tmp_path):
    path = tmp_path / "trace.json"
    assert main(["simulate", "--protocol", "snapshot", "--out", str(path)]) == 0
    doc = json.loads(path.read_text())
    doc["rounds"][1]["digests"][0] = "0" * 32
    path.write_text(json.dumps(doc))
    code, out = _run(capsys, "verify", str(path))
    assert code == 2
    [report] = json.loads(out)
    assert report["first_mismatched_round"] == 2


def test_verify_register_outcome(capsys, tmp_path):
    path = tmp_path / "outcome.json"
    path.write_text(json.dumps(simulate_rwwf(3, 1, seed=0).to_dict()))
    code, out = _run(capsys, "verify", str(path))
    assert code == 0
    assert json.loads(out)[0]["kind"] == "register-outcome"


def test_verify_needs_input(capsys):
    assert main(["verify"]) == 64


def test_oracle_command(capsys):
    code, out = _run(capsys, "oracle", "tournament-facts", "--n", "3")
    assert code == 0
    assert json.loads(out)["tournaments"] == 8
    assert main(["oracle", "nope"]) == 64


def test_enumerate_pairs_round(capsys):
    code, out = _run(capsys, "enumerate", "--spec", "tp-pairs", "--n", "3", "--round", "1")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert json.loads(lines[0])["edges"] == [[0, 2], [2, 0]]
    assert json.loads(lines[1])["edges"] == [[0, 2]]


def test_missing_required_option_exits_with_usage_code():
    with pytest.raises(SystemExit) as info:
        main(["exhaustive"])
    assert info.value.code == 64


def test_parse_params():
    assert parse_params(["rounds=4", "schedule=RR"]) == {"rounds": 4, "schedule": "RR"}
    with pytest.raises(UsageError):
        parse_params(["rounds"])


def test_config_validation():
    with pytest.raises(UsageError):
        Config(command="simulate", jobs=0)
    with pytest.raises(UsageError):
        Config(command="exhaustive", property="liveness")
    with pytest.raises(UsageError):
        Config(command="simulate", spec="tp-pairs:0-1", n=3)
    assert Config(command="simulate", verbosity=1).log_level == logging.INFO
    assert Config(command="simulate", verbosity=3).log_level == logging.DEBUG
    assert Config(command="simulate", verbosity=-1).log_level == logging.WARNING

from __future__ import annotations

import json

import pytest

from src.cli import RunConfig, main, run
from src.errors import ConfigError


def _json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_orderfree_two_coins(capsys):
    assert main(["orderfree", "--entities", "2", "--states", "2"]) == 0
    payload = _json(capsys)
    assert payload["count"] == 3
    assert payload["ordered_count"] == 4
    assert payload["multisets"] == [[2, 0], [1, 1], [0, 2]]


def test_phases_report(capsys):
    assert main(["phases", "--spins", "1/2,1", "--trials", "6", "--seed", "7"]) == 0
    payload = _json(capsys)
    assert payload["sign"] == "alternating"
    rows = {(r["s"], r["construction"]): r for r in payload["rows"]}
    assert rows[("1/2", "labeled")]["expected_phase"] == -1
    assert rows[("1/2", "labeled")]["mean_phase"]["re"] == pytest.approx(-1.0)
    assert rows[("1", "labeled")]["expected_phase"] == 1
    assert all(r["max_dev"] < 1e-10 for r in payload["rows"])
    assert all(r["permutation_ok"] for r in payload["rows"])


def test_same_seed_same_output(capsys):
    argv = ["phases", "--spins", "3/2", "--trials", "4", "--seed", "99", "--sign", "-1"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_exclusion_tsv(capsys):
    assert main(["exclusion", "--spins", "1/2", "--momentum", "0,1,0", "--output", "tsv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "s\tS\tM\tnorm\tstatus"
    assert [line.split("\t")[-1] for line in lines[1:]] == ["allowed", "excluded"]


def test_frames_with_hint(capsys):
    assert main(["frames", "--va", "0,0,1", "--vb", "0,0,1", "--hint", "1,0,0"]) == 0
    payload = _json(capsys)
    assert payload["coincident"] is True
    assert payload["y_dot"] == pytest.approx(-1.0)


def test_frames_coincident_without_hint_exits_2(capsys):
    assert main(["frames", "--va", "1,0,0", "--vb", "1,0,0"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "spin-exchange: error:" in captured.err


def test_zero_vector_exits_2(capsys):
    assert main(["frames", "--va", "0,0,0", "--vb", "1,0,0"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["phases", "--sign", "2"],
        ["phases", "--spins", "1/3"],
        ["frames", "--va", "1,0", "--vb", "1,0,0"],
        ["orderfree", "--entities", "0"],
        ["phases", "--spins", "1/2", "--trials", "2", "--seed", "-5"],
        ["teleport"],
    ],
)
def test_bad_flags_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_missing_config_file_exits_2(tmp_path, capsys):
    assert main(["orderfree", "--config", str(tmp_path / "nope.json")]) == 2
    assert "file not found" in capsys.readouterr().err


def test_unknown_log_level_exits_2(capsys):
    assert main(["orderfree", "--log-level", "chatty"]) == 2


def test_metadata_only_written_on_request(tmp_path, capsys):
    assert main(["orderfree", "--metadata-dir", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "orderfree_metadata.json").read_text(encoding="utf-8"))
    assert meta["extra"]["entities"] == 2


def test_verify_with_shipped_defaults(capsys):
    assert main(["verify"]) == 0
    payload = _json(capsys)
    assert payload["trials"] == 200
    assert [c["name"] for c in payload["checks"] if not c["ok"]] == []


def test_verify_small_run(capsys):
    assert main(["verify", "--trials", "2", "--spins", "1/2"]) == 0
    payload = _json(capsys)
    assert payload["ok"] is True
    assert all(c["ok"] for c in payload["checks"])


def test_run_config_validation():
    rc = RunConfig(command="frames", spins=(), trials=1, seed=0, sign=None, output="json")
    with pytest.raises(ConfigError):
        run(rc)
    with pytest.raises(ConfigError):
        RunConfig(command="orderfree", spins=(), trials=1, seed=0, sign=3, output="json").validate()
    with pytest.raises(ConfigError):
        RunConfig(command="orderfree", spins=(), trials=1, seed=-1, sign=None, output="json").validate()

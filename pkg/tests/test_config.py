from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.errors import ConfigError, DomainError
from src.spin.rotor import HalfSpin
from src.utils.config import DEFAULTS, Config, project_root
from src.utils.io import atomic_write_text, frame_to_tsv
from src.utils.logging_setup import setup_logger
from src.utils.run_metadata import write_run_metadata
from src.validation.checks import (
    assert_orthonormal_frame,
    assert_unitary,
    require_perpendicular,
    require_unit_vector,
    require_vector3,
)


def _write(tmp_path: Path, payload: dict) -> Path:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


# ---------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------

def test_shipped_config_matches_defaults():
    with (project_root() / "config.json").open(encoding="utf-8") as f:
        assert json.load(f) == DEFAULTS
    cfg = Config.load()
    assert cfg.trials == 200
    assert cfg.seed == 7
    assert [str(s) for s in cfg.spins] == ["0", "1/2", "1", "3/2", "2", "5/2"]
    assert cfg.tolerances.exchange == 1e-10
    assert cfg.log_dir is None


def test_partial_config_is_merged_over_defaults(tmp_path):
    cfg = Config.load(_write(tmp_path, {"defaults": {"trials": 5, "spins": ["1/2"]}}))
    assert cfg.trials == 5
    assert cfg.spins == (HalfSpin(1),)
    assert cfg.seed == DEFAULTS["defaults"]["seed"]


def test_relative_paths_resolve_against_project_root(tmp_path):
    cfg = Config.load(_write(tmp_path, {"logging": {"log_dir": "logs"}}))
    assert cfg.log_dir == (project_root() / "logs").resolve()


@pytest.mark.parametrize(
    "payload",
    [
        {"defaults": {"sign": 0}},
        {"defaults": {"trials": 0}},
        {"defaults": {"seed": -1}},
        {"defaults": {"spins": ["1/3"]}},
        {"defaults": {"output": "xml"}},
        {"tolerances": {"exchange": -1.0}},
        {"logging": {"level": "LOUD"}},
    ],
)
def test_invalid_config_raises(tmp_path, payload):
    with pytest.raises(ConfigError):
        Config.load(_write(tmp_path, payload))


def test_missing_or_malformed_file(tmp_path):
    with pytest.raises(ConfigError):
        Config.load(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        Config.load(bad)


# ---------------------------------------------------------------------
# Logging, IO, metadata
# ---------------------------------------------------------------------

def test_setup_logger_is_idempotent(tmp_path):
    log = setup_logger("src.tests.idempotent", tmp_path, "test.log", level="INFO")
    n = len(log.handlers)
    again = setup_logger("src.tests.idempotent", tmp_path, "test.log", level="DEBUG")
    assert again is log
    assert len(again.handlers) == n == 2
    assert all(h.level == logging.DEBUG for h in again.handlers)
    log.info("hello")
    for h in log.handlers:
        h.flush()
    assert "| INFO | src.tests.idempotent | hello" in (tmp_path / "test.log").read_text(encoding="utf-8")


def test_atomic_write_leaves_no_temp_files(tmp_path):
    out = tmp_path / "nested" / "report.txt"
    atomic_write_text("abc", out)
    assert out.read_text(encoding="utf-8") == "abc"
    assert [p.name for p in out.parent.iterdir()] == ["report.txt"]


def test_tsv_keeps_full_precision():
    text = frame_to_tsv(pd.DataFrame({"name": ["x"], "value": [0.1 + 0.2]}))
    assert text == "name\tvalue\nx\t0.30000000000000004\n"


def test_run_metadata_is_written(tmp_path):
    path = write_run_metadata(tmp_path, "phases", {"seed": 7})
    meta = json.loads(path.read_text(encoding="utf-8"))
    assert path.name == "phases_metadata.json"
    assert meta["extra"] == {"seed": 7}
    assert set(meta["packages"]) == {"numpy", "scipy", "pandas"}


# ---------------------------------------------------------------------
# Guard checks
# ---------------------------------------------------------------------

def test_vector_guards():
    with pytest.raises(DomainError):
        require_vector3([1.0, 2.0])
    with pytest.raises(DomainError):
        require_vector3([1.0, float("nan"), 0.0])
    with pytest.raises(DomainError):
        require_unit_vector([1.0, 1.0, 0.0])
    np.testing.assert_allclose(require_unit_vector([1.0 + 1e-12, 0.0, 0.0]), [1.0, 0.0, 0.0], atol=0)
    with pytest.raises(DomainError):
        require_perpendicular(np.array([1.0, 0.0, 0.0]), np.array([1.0, 1.0, 0.0]))


def test_matrix_guards():
    e = np.eye(3)
    assert_orthonormal_frame(e[0], e[1], e[2])
    with pytest.raises(DomainError):
        assert_orthonormal_frame(e[0], e[1], e[0])
    assert_unitary(np.array([[0, 1j], [1j, 0]]))
    with pytest.raises(DomainError):
        assert_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))

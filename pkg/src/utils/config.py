"""
Central configuration loader.

Why this exists:
- Keeps run defaults (trials, seed, spins) and verification tolerances out of
  the analysis code.
- Makes runs reproducible: the same config.json plus the same flags gives
  byte-identical reports.
- Provides one source of truth for the tolerances `verify` checks against.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict

from src.errors import ConfigError
from src.spin.rotor import HalfSpin

OUTPUT_FORMATS = ("json", "tsv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# Mirrors the shipped config.json so an installed package runs without it.
DEFAULTS: Dict[str, Any] = {
    "defaults": {
        "trials": 200,
        "seed": 7,
        "sign": 1,
        "output": "json",
        "spins": ["0", "1/2", "1", "3/2", "2", "5/2"],
        "momentum": [0.0, 0.0, 1.0],
    },
    "tolerances": {
        "exchange": 1e-10,
        "double_cover": 1e-12,
        "representation": 1e-10,
        "frame": 1e-12,
        "cg": 1e-12,
        "exclusion": 1e-10,
    },
    "logging": {"level": "WARNING", "log_dir": None, "metadata_dir": None},
}


def project_root() -> Path:
    """
    Return the project root directory.

    Why:
    - Allows config.json and relative log/metadata directories to resolve the
      same way regardless of the working directory.
    """
    # This file is in src/utils/, so parents[2] should be the repo root.
    return Path(__file__).resolve().parents[2]


@dataclass(frozen=True)
class Tolerances:
    exchange: float
    double_cover: float
    representation: float
    frame: float
    cg: float
    exclusion: float


@dataclass(frozen=True)
class Config:
    """
    Parsed project configuration (run defaults + tolerances + logging).

    Notes:
    - Paths are resolved relative to the project root.
    - CLI flags override the defaults held here.
    """

    project_root: Path

    # Run defaults
    trials: int
    seed: int
    sign: int
    output: str
    spins: tuple[HalfSpin, ...]
    momentum: tuple[float, float, float]

    tolerances: Tolerances

    # Logging / metadata
    log_level: str
    log_dir: Path | None
    metadata_dir: Path | None

    @staticmethod
    def load(path: Path | None = None) -> "Config":
        """
        Load config.json and return a Config object.

        Args:
            path: Optional path to a config file. If None, uses <repo>/config.json
                and falls back to the built-in defaults when that file is absent.

        Returns:
            Config: A validated, path-resolved config object.
        """
        root = project_root()
        cfg_path = path or (root / "config.json")

        d: Dict[str, Any] = copy.deepcopy(DEFAULTS)
        if cfg_path.exists():
            try:
                with cfg_path.open("r", encoding="utf-8") as f:
                    loaded = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"[config] {cfg_path} is not valid JSON: {exc}") from exc
            for section, values in loaded.items():
                if isinstance(values, dict) and isinstance(d.get(section), dict):
                    d[section].update(values)
                else:
                    d[section] = values
        elif path is not None:
            raise ConfigError(f"[config] file not found: {cfg_path}")

        return Config.from_dict(d, root)

    @staticmethod
    def from_dict(d: Dict[str, Any], root: Path | None = None) -> "Config":
        root = root or project_root()
        try:
            dft = d["defaults"]
            tol = d["tolerances"]
            log = d["logging"]

            def p(rel: str | None) -> Path | None:
                return None if rel is None else (root / rel).resolve()

            cfg = Config(
                project_root=root.resolve(),
                trials=int(dft["trials"]),
                seed=int(dft["seed"]),
                sign=int(dft["sign"]),
                output=str(dft["output"]),
                spins=tuple(HalfSpin.parse(s) for s in dft["spins"]),
                momentum=tuple(float(c) for c in dft["momentum"]),  # type: ignore[arg-type]
                tolerances=Tolerances(**{k: float(v) for k, v in tol.items()}),
                log_level=str(log["level"]).upper(),
                log_dir=p(log.get("log_dir")),
                metadata_dir=p(log.get("metadata_dir")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            # DomainError from HalfSpin.parse is a ValueError too.
            raise ConfigError(f"[config] invalid configuration: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"[config] trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"[config] seed must be >= 0, got {self.seed}")
        if self.sign not in (1, -1):
            raise ConfigError(f"[config] sign must be +1 or -1, got {self.sign}")
        if self.output not in OUTPUT_FORMATS:
            raise ConfigError(f"[config] output must be one of {OUTPUT_FORMATS}, got {self.output!r}")
        if not self.spins or any(s.twice < 0 for s in self.spins):
            raise ConfigError("[config] spins must be a nonempty list of magnitudes")
        if len(self.momentum) != 3:
            raise ConfigError("[config] momentum must have three components")
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"[config] logging.level must be one of {LOG_LEVELS}")
        for name, value in vars(self.tolerances).items():
            if not value > 0:
                raise ConfigError(f"[config] tolerance {name} must be positive")

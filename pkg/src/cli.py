"""
Command-line front end.

Subcommands:
  phases     exchange-phase sweep over random geometries (labelled + symmetric)
  exclusion  coupled-state norms of identical particles for every total spin S
  frames     pair geometry, frames and relating rotors for two given vectors
  orderfree  unordered collections vs ordered lists for n entities over k states
  verify     full invariant suite; exit code 1 on any failure

Why this exists:
- Identical seed + config gives byte-identical stdout; logs go to stderr and
  run metadata is only written when --metadata-dir is given.
- Bad flags and domain errors exit with code 2 and a one-line message.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import pandas as pd

from src.analysis.exclusion_table import exclusion_table
from src.analysis.frame_dump import frame_report, frame_table
from src.analysis.order_free import order_free_table
from src.analysis.phase_sweep import phase_sweep
from src.analysis.verify import results_table, run_checks
from src.errors import ConfigError, DomainError, SpinStatsError
from src.spin.rotor import HalfSpin, Rotor
from src.utils.config import DEFAULTS, OUTPUT_FORMATS, Config, Tolerances
from src.utils.io import frame_to_tsv
from src.utils.logging_setup import setup_logger
from src.utils.run_metadata import write_run_metadata

COMMANDS = ("phases", "exclusion", "frames", "orderfree", "verify")

logger = logging.getLogger("src.cli")

Vector3 = tuple[float, float, float]


# ---------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one CLI invocation (config.json defaults + flags)."""

    command: str
    spins: tuple[HalfSpin, ...]
    trials: int
    seed: int
    sign: int | None
    output: str
    momenta: tuple[Vector3, Vector3] | None = None
    momentum: Vector3 = (0.0, 0.0, 1.0)
    hint: Vector3 | None = None
    entities: int = 2
    states: int = 2
    tolerances: Tolerances = field(
        default_factory=lambda: Tolerances(**DEFAULTS["tolerances"])
    )
    metadata_dir: Path | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"[run] unknown command {self.command!r}")
        if self.trials < 1:
            raise ConfigError(f"[run] trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"[run] seed must be >= 0, got {self.seed}")
        if self.sign not in (None, 1, -1):
            raise ConfigError(f"[run] sign must be +1 or -1, got {self.sign}")
        if self.output not in OUTPUT_FORMATS:
            raise ConfigError(f"[run] output must be one of {OUTPUT_FORMATS}")
        if self.command in ("phases", "exclusion") and not self.spins:
            raise ConfigError("[run] at least one spin is required")
        if self.command == "frames" and self.momenta is None:
            raise ConfigError("[run] frames needs --va and --vb")

    def metadata(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "spins": [str(s) for s in self.spins],
            "trials": self.trials,
            "seed": self.seed,
            "sign": self.sign,
            "output": self.output,
            "momenta": self.momenta,
            "momentum": self.momentum,
            "hint": self.hint,
            "entities": self.entities,
            "states": self.states,
        }


# ---------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------

def _vector(text: str) -> Vector3:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a vector: {text!r}") from exc
    if len(parts) != 3 or not all(math.isfinite(x) for x in parts):
        raise argparse.ArgumentTypeError(f"expected three finite components, got {text!r}")
    return (parts[0], parts[1], parts[2])


def _spins(text: str) -> tuple[HalfSpin, ...]:
    try:
        spins = tuple(HalfSpin.parse(x) for x in text.split(",") if x.strip())
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not spins or any(s.twice < 0 for s in spins):
        raise argparse.ArgumentTypeError(f"expected spin magnitudes like 0,1/2,1 got {text!r}")
    return spins


def _sign(text: str) -> int:
    if text not in ("1", "+1", "-1"):
        raise argparse.ArgumentTypeError("sign must be +1 or -1")
    return int(text)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help="Base seed for per-trial generators.")
    common.add_argument("--trials", type=_positive_int, default=None, help="Random trials per spin.")
    common.add_argument("--sign", type=_sign, default=None, help="Sense of R_co (+1 or -1).")
    common.add_argument("--output", choices=OUTPUT_FORMATS, default=None, help="Report format.")
    common.add_argument("--config", type=Path, default=None, help="Alternative config.json.")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
    common.add_argument("--metadata-dir", type=Path, default=None, help="Write run metadata JSON here.")

    parser = argparse.ArgumentParser(
        prog="spin-exchange",
        description="Exchange phases, frames and exclusion rules from SU(2) frame rotations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", parents=[common], help="Exchange-phase sweep.")
    p.add_argument("--spins", type=_spins, default=None, help='Comma list, e.g. "0,1/2,1".')

    p = sub.add_parser("exclusion", parents=[common], help="Exclusion-rule table.")
    p.add_argument("--spins", type=_spins, default=None)
    p.add_argument("--momentum", type=_vector, default=None, help="Shared momentum, e.g. 0,0,1.")

    p = sub.add_parser("frames", parents=[common], help="Frame geometry for two vectors.")
    p.add_argument("--va", type=_vector, required=True)
    p.add_argument("--vb", type=_vector, required=True)
    p.add_argument("--hint", type=_vector, default=None, help="Azimuth hint for coincident vectors.")

    p = sub.add_parser("orderfree", parents=[common], help="Order-free multiset counting.")
    p.add_argument("--entities", type=_positive_int, default=2)
    p.add_argument("--states", type=_positive_int, default=2)

    p = sub.add_parser("verify", parents=[common], help="Run the invariant suite.")
    p.add_argument("--spins", type=_spins, default=None)
    return parser


def resolve(args: argparse.Namespace, cfg: Config) -> RunConfig:
    """Merge parsed flags over config defaults."""
    spins = getattr(args, "spins", None) or cfg.spins
    sign = args.sign if args.sign is not None else (None if args.command in ("phases", "verify") else cfg.sign)
    momenta = None
    if args.command == "frames":
        momenta = (args.va, args.vb)
    run_cfg = RunConfig(
        command=args.command,
        spins=tuple(spins),
        trials=args.trials if args.trials is not None else cfg.trials,
        seed=args.seed if args.seed is not None else cfg.seed,
        sign=sign,
        output=args.output or cfg.output,
        momenta=momenta,
        momentum=getattr(args, "momentum", None) or cfg.momentum,
        hint=getattr(args, "hint", None),
        entities=getattr(args, "entities", 2),
        states=getattr(args, "states", 2),
        tolerances=cfg.tolerances,
        metadata_dir=args.metadata_dir or cfg.metadata_dir,
    )
    run_cfg.validate()
    return run_cfg


# ---------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------

def _jsonable(obj: Any) -> Any:
    """Convert report values: complex -> {re, im}, rotors -> [w, x, y, z], spins -> "3/2"."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(float(obj.real)), "im": _jsonable(float(obj.imag))}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    if isinstance(obj, HalfSpin):
        return str(obj)
    if isinstance(obj, Rotor):
        return obj.to_list()
    return obj


def _records(df: pd.DataFrame) -> list[dict[str, Any]]:
    return [dict(zip(df.columns, row)) for row in df.itertuples(index=False, name=None)]


def emit(payload: dict[str, Any], table: pd.DataFrame, output: str) -> None:
    if output == "tsv":
        sys.stdout.write(frame_to_tsv(table))
    else:
        sys.stdout.write(json.dumps(_jsonable(payload), indent=2) + "\n")
    sys.stdout.flush()


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------

def _phases(rc: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    df = phase_sweep(rc.spins, rc.trials, rc.seed, rc.sign, rc.tolerances.exchange)
    rows = []
    for rec in _records(df):
        rec["mean_phase"] = complex(rec.pop("mean_re"), rec.pop("mean_im"))
        rows.append(rec)
    payload = {
        "command": "phases",
        "seed": rc.seed,
        "trials": rc.trials,
        "sign": rc.sign if rc.sign is not None else "alternating",
        "rows": rows,
    }
    return payload, df, 0


def _exclusion(rc: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    sign = rc.sign if rc.sign is not None else 1
    df = exclusion_table(rc.spins, rc.momentum, sign, tol=rc.tolerances.exclusion)
    payload = {"command": "exclusion", "momentum": rc.momentum, "sign": sign, "rows": _records(df)}
    return payload, df, 0


def _frames(rc: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    assert rc.momenta is not None
    report = frame_report(rc.momenta[0], rc.momenta[1], rc.hint)
    return {"command": "frames", **report}, frame_table(report), 0


def _orderfree(rc: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    result, df = order_free_table(rc.entities, rc.states)
    payload = {
        "command": "orderfree",
        "entities": result.num_entities,
        "states": result.states_per_entity,
        "count": result.count,
        "ordered_count": result.ordered_count,
        "multisets": result.multisets,
    }
    return payload, df, 0


def _verify(rc: RunConfig) -> tuple[dict[str, Any], pd.DataFrame, int]:
    results = run_checks(rc.seed, rc.trials, rc.tolerances, rc.spins)
    df = results_table(results)
    ok = all(r.ok for r in results)
    payload = {"command": "verify", "seed": rc.seed, "trials": rc.trials, "ok": ok, "checks": _records(df)}
    return payload, df, 0 if ok else 1


HANDLERS = {
    "phases": _phases,
    "exclusion": _exclusion,
    "frames": _frames,
    "orderfree": _orderfree,
    "verify": _verify,
}


def run(config: RunConfig) -> int:
    """Execute one command, write its report to stdout and return the exit code."""
    config.validate()
    payload, table, code = HANDLERS[config.command](config)
    emit(payload, table, config.output)
    if config.metadata_dir is not None:
        path = write_run_metadata(config.metadata_dir, config.command, config.metadata())
        logger.info("run metadata written to %s", path)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = Config.load(args.config)
        level = (args.log_level or cfg.log_level).upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ConfigError(f"[run] unknown log level {level!r}")
        setup_logger("src", cfg.log_dir, "spin_exchange.log", level=level)
        return run(resolve(args, cfg))
    except SpinStatsError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2

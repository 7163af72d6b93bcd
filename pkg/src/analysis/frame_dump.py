"""
Frame-geometry dump for one pair of vectors.

Why this exists:
- Shows the whole frame construction for a concrete pair: bisector,
  half-angle, parallel and bisecting frames, both relating rotors and the
  2*pi rotor their same-sense composition produces.
"""

from __future__ import annotations

import math
from typing import Any, Sequence

import numpy as np
import pandas as pd

from src.errors import DomainError
from src.geometry.frames import (
    bisecting_frames,
    bisecting_offset,
    pair_geometry,
    parallel_frames,
    relating_rotor,
)
from src.spin.rotor import compose, frame_rotor, inverse
from src.validation.checks import require_vector3


def _unit(v: Sequence[float], name: str) -> np.ndarray:
    arr = require_vector3(v, name)
    n = float(np.linalg.norm(arr))
    if n == 0.0:
        raise DomainError(f"[{name}] zero vector has no direction")
    return arr / n


def frame_report(
    v_a: Sequence[float],
    v_b: Sequence[float],
    azimuth_hint: Sequence[float] | None = None,
) -> dict[str, Any]:
    """Everything the frames module derives from (v_a, v_b); inputs are normalised first."""
    a, b = _unit(v_a, "v_a"), _unit(v_b, "v_b")
    g = pair_geometry(a, b)
    hint = None if azimuth_hint is None else _unit(azimuth_hint, "azimuth_hint")
    bis_a, bis_b = bisecting_frames(g.v_a, g.v_b, hint)

    parallel: dict[str, Any] | None = None
    offsets: dict[str, list[float]] | None = None
    if not g.is_coincident:
        par_a, par_b = parallel_frames(g.v_a, g.v_b)
        off_a, off_b = bisecting_offset(g.v_a, g.v_b)
        parallel = {"a": par_a.to_dict(), "b": par_b.to_dict()}
        offsets = {"a": off_a.to_list(), "b": off_b.to_list()}

    r_plus = relating_rotor(g, 1)
    r_minus = relating_rotor(g, -1)
    return {
        "geometry": g.to_dict(),
        "coincident": g.is_coincident,
        "parallel_frames": parallel,
        "bisecting_frames": {"a": bis_a.to_dict(), "b": bis_b.to_dict()},
        "frame_rotors": {"a": frame_rotor(bis_a).to_list(), "b": frame_rotor(bis_b).to_list()},
        "bisecting_offsets": offsets,
        "relating_rotors": {
            "plus": r_plus.to_list(),
            "minus": r_minus.to_list(),
            "inverse_plus": inverse(r_plus).to_list(),
            "plus_twice": compose(r_plus, r_plus).to_list(),
        },
        "y_dot": float(np.dot(bis_a.y, bis_b.y)),
        "theta_degrees": math.degrees(g.theta),
    }


def frame_table(report: dict[str, Any]) -> pd.DataFrame:
    """Flatten a frame_report into (name, c0..c3) rows for TSV output."""
    rows: list[dict[str, Any]] = []

    def add(name: str, values: Sequence[float] | float) -> None:
        vals = [values] if isinstance(values, (int, float)) else list(values)
        row: dict[str, Any] = {"name": name}
        for i in range(4):
            row[f"c{i}"] = float(vals[i]) if i < len(vals) else float("nan")
        rows.append(row)

    geo = report["geometry"]
    for key in ("v_a", "v_b", "k", "theta"):
        add(key, geo[key])
    for kind in ("parallel_frames", "bisecting_frames"):
        frames = report[kind]
        if frames is None:
            continue
        for particle in ("a", "b"):
            for axis in ("x", "y", "z"):
                add(f"{kind}.{particle}.{axis}", frames[particle][axis])
    for group in ("frame_rotors", "bisecting_offsets", "relating_rotors"):
        items = report[group]
        if items is None:
            continue
        for key, rotor in items.items():
            add(f"{group}.{key}", rotor)
    add("y_dot", report["y_dot"])
    return pd.DataFrame(rows, columns=["name", "c0", "c1", "c2", "c3"])


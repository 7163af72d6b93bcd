"""Exclusion table: coupled-state norms for identical particles over several spins."""

from __future__ import annotations

from typing import Sequence

import pandas as pd

from src.spin.coupling import exclusion_report
from src.spin.rotor import IDENTITY, HalfSpin, Rotor

SPECIES = (("species", "x"),)


def exclusion_table(
    spins: Sequence[HalfSpin],
    momentum: Sequence[float],
    sign: int = 1,
    F: Rotor = IDENTITY,
    azimuth_hint: Sequence[float] | None = None,
    tol: float = 1e-10,
) -> pd.DataFrame:
    frames = [exclusion_report(SPECIES, momentum, s, F, sign, azimuth_hint, tol) for s in spins]
    return pd.concat(frames, ignore_index=True)

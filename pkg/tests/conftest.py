from __future__ import annotations

import numpy as np
import pytest

from src.spin.rotor import HalfSpin

SPINS = [HalfSpin(t) for t in range(6)]
SPIN_IDS = [str(s) for s in SPINS]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)

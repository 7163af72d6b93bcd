"""
Clebsch-Gordan coupling of two particles to total spin, and the exclusion check.

Why this exists:
- For identical particles with all other quantum numbers equal, the
  labelled common-frame construction multiplies the swapped-order terms by
  the exchange phase. Combined with the CG swap symmetry (-1)^(S - 2s) this
  cancels every odd total spin S. exclusion_report makes that visible as a
  table of norms.

Coefficients follow the Condon-Shortley phase convention (Racah's closed form).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from src.errors import DomainError, QuantizationFrameError
from src.geometry.frames import perpendicular_axis
from src.quantum.states import QInput, inner_product, momenta_match
from src.quantum.twoparticle import (
    ParticleSpec,
    TwoParticleState,
    combine,
    labeled_common_frame_state,
    norm,
    particle_kets,
)
from src.spin.rotor import IDENTITY, HalfSpin, Rotor
from src.spin.wigner import require_spin_cap

logger = logging.getLogger(__name__)

EXCLUSION_TOL = 1e-10


# ---------------------------------------------------------------------
# Clebsch-Gordan coefficients
# ---------------------------------------------------------------------

def triangle_ok(s1: HalfSpin, s2: HalfSpin, S: HalfSpin) -> bool:
    return (
        abs(s1.twice - s2.twice) <= S.twice <= s1.twice + s2.twice
        and (s1.twice + s2.twice - S.twice) % 2 == 0
    )


def allowed_totals(s1: HalfSpin, s2: HalfSpin) -> list[HalfSpin]:
    """|s1 - s2|, ..., s1 + s2."""
    return [HalfSpin(t) for t in range(abs(s1.twice - s2.twice), s1.twice + s2.twice + 1, 2)]


@dataclass(frozen=True)
class CGQuery:
    """<s1 m1; s2 m2 | S M>."""

    s1: HalfSpin
    s2: HalfSpin
    S: HalfSpin
    m1: HalfSpin
    m2: HalfSpin
    M: HalfSpin

    def validate(self) -> None:
        for name in ("s1", "s2", "S"):
            require_spin_cap(getattr(self, name), name)
        if not triangle_ok(self.s1, self.s2, self.S):
            raise DomainError(f"[cg] ({self.s1}, {self.s2}) cannot couple to S = {self.S}")
        for m, s, name in ((self.m1, self.s1, "m1"), (self.m2, self.s2, "m2"), (self.M, self.S, "M")):
            if not m.is_component_of(s):
                raise DomainError(f"[{name}] {m} is not a valid component of spin {s}")


def _f(twice: int) -> int:
    return math.factorial(twice // 2)


def cg(q: CGQuery) -> float:
    """Clebsch-Gordan coefficient; zero unless M = m1 + m2."""
    q.validate()
    if q.M.twice != q.m1.twice + q.m2.twice:
        return 0.0

    j1, j2, j = q.s1.twice, q.s2.twice, q.S.twice
    m1, m2, m = q.m1.twice, q.m2.twice, q.M.twice

    pref = (j + 1) * _f(j + j1 - j2) * _f(j - j1 + j2) * _f(j1 + j2 - j) / _f(j1 + j2 + j + 2)
    pref *= _f(j + m) * _f(j - m) * _f(j1 - m1) * _f(j1 + m1) * _f(j2 - m2) * _f(j2 + m2)

    # Summation bounds keep every factorial argument non-negative.
    k_min = max(0, (j2 - j - m1) // 2, (j1 - j + m2) // 2)
    k_max = min((j1 + j2 - j) // 2, (j1 - m1) // 2, (j2 + m2) // 2)
    total = 0.0
    for k in range(k_min, k_max + 1):
        denom = (
            math.factorial(k)
            * _f(j1 + j2 - j - 2 * k)
            * _f(j1 - m1 - 2 * k)
            * _f(j2 + m2 - 2 * k)
            * _f(j - j2 + m1 + 2 * k)
            * _f(j - j1 - m2 + 2 * k)
        )
        total += (-1.0 if k % 2 else 1.0) / denom
    return math.sqrt(pref) * total


def clebsch_gordan(
    s1: HalfSpin, m1: HalfSpin, s2: HalfSpin, m2: HalfSpin, S: HalfSpin, M: HalfSpin
) -> float:
    return cg(CGQuery(s1=s1, s2=s2, S=S, m1=m1, m2=m2, M=M))


def cg_table(s1: HalfSpin, s2: HalfSpin) -> pd.DataFrame:
    """All nonzero coefficients for coupling s1 with s2."""
    rows = []
    for S in allowed_totals(s1, s2):
        for M in S.components():
            for m1 in s1.components():
                m2 = HalfSpin(M.twice - m1.twice)
                if not m2.is_component_of(s2):
                    continue
                value = clebsch_gordan(s1, m1, s2, m2, S, M)
                if abs(value) > 1e-15:
                    rows.append(
                        {
                            "s1": str(s1),
                            "s2": str(s2),
                            "S": str(S),
                            "M": str(M),
                            "m1": str(m1),
                            "m2": str(m2),
                            "value": value,
                        }
                    )
    return pd.DataFrame(rows, columns=["s1", "s2", "S", "M", "m1", "m2", "value"])


# ---------------------------------------------------------------------
# Total-spin states
# ---------------------------------------------------------------------

def _require_shared_quantization(a: ParticleSpec, b: ParticleSpec) -> None:
    if a.basis != b.basis:
        raise QuantizationFrameError(
            f"[couple_total_spin] particles use different bases ({a.basis} vs {b.basis})"
        )
    if a.basis == "helicity" and not momenta_match(a.direction, b.direction):
        raise QuantizationFrameError(
            "[couple_total_spin] helicity axes differ when the momentum directions differ"
        )


def couple_total_spin(
    a: ParticleSpec,
    b: ParticleSpec,
    S: HalfSpin,
    M: HalfSpin,
    F: Rotor = IDENTITY,
    sign: int = 1,
    azimuth_hint: Sequence[float] | None = None,
) -> TwoParticleState:
    """
    sum_{ma, mb} C(ma, mb; S, M) * labelled state(a with ma, b with mb).

    Each labelled state enters with its direct-product weight 1 / (2 alpha),
    undoing the symmetrisation normalisation, so allowed total-spin states
    of identical particles come out with unit norm. The spin quanta carried
    by `a` and `b` are ignored.
    """
    if a.s != b.s:
        raise DomainError(f"[couple_total_spin] spins differ ({a.s} vs {b.s})")
    _require_shared_quantization(a, b)
    s = a.s
    require_spin_cap(s)
    if not triangle_ok(s, s, S):
        raise DomainError(f"[S] spins {s} and {s} cannot couple to {S}")
    if not M.is_component_of(S):
        raise DomainError(f"[M] {M} is not a valid component of total spin {S}")

    parts = []
    for ma in s.components():
        mb = HalfSpin(M.twice - ma.twice)
        if not mb.is_component_of(s):
            continue
        c = clebsch_gordan(s, ma, s, mb, S, M)
        if c == 0.0:
            continue
        t = labeled_common_frame_state(a.with_spin_quantum(ma), b.with_spin_quantum(mb), F, sign, azimuth_hint)
        k1, k2 = particle_kets(t)
        weight = math.sqrt(2.0 + 2.0 * abs(inner_product(k1, k2)) ** 2) / 2.0
        parts.append((c * weight, t))
    return combine(parts)


def exclusion_report(
    Q: QInput,
    p: Sequence[float],
    s: HalfSpin,
    F: Rotor = IDENTITY,
    sign: int = 1,
    azimuth_hint: Sequence[float] | None = None,
    tol: float = EXCLUSION_TOL,
) -> pd.DataFrame:
    """
    Norm of the coupled state of two identical particles for each S in 0..2s.

    Both particles share Q and p, so their bisecting frames are only defined
    through an azimuth hint; when none is given a perpendicular axis is
    chosen and logged.
    """
    s.require_magnitude()
    mom = np.asarray(p, dtype=float)
    if not np.any(mom):
        raise DomainError("[p] exclusion_report needs a nonzero momentum")
    if azimuth_hint is None:
        azimuth_hint = perpendicular_axis(mom)
        logger.info("exclusion_report: using azimuth hint %s", np.round(azimuth_hint, 12).tolist())

    spec = ParticleSpec(Q, tuple(mom), s, s)
    rows = []
    for S in allowed_totals(s, s):
        M = HalfSpin(0)
        t = couple_total_spin(spec, spec, S, M, F, sign, azimuth_hint)
        value = norm(t)
        rows.append(
            {
                "s": str(s),
                "S": str(S),
                "M": str(M),
                "norm": value,
                "status": "excluded" if value < tol else "allowed",
            }
        )
        logger.debug("exclusion_report: s=%s S=%s norm=%.3e", s, S, value)
    return pd.DataFrame(rows, columns=["s", "S", "M", "norm", "status"])

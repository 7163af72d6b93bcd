"""
Symmetric two-particle frame geometry.

Why this exists:
- Two particles can only be described symmetrically if each gets its own
  frame built from the pair. The y-axes of those frames point in opposite
  directions (y_b = -y_a), and that asymmetry survives even when the two
  vectors coincide.
- The rotor relating the two bisecting frames is a pi turn about the
  bisector k. Which sense of the turn (+pi or -pi) is a labelled choice, and
  two same-sense turns compose to the 2*pi rotor.

Conventions:
- Parallel frame of particle c (other particle o): z = v_c, y = v_c x v_o / |...|.
- Bisecting frame: z = k (the bisector), same y.
- Only the branch theta in [0, pi/2) of the half-angle is used.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import DegenerateGeometryError, DomainError
from src.spin.rotor import Rotor, from_axis_angle, rotate_vector
from src.validation.checks import (
    assert_orthonormal_frame,
    require_perpendicular,
    require_unit_vector,
    require_vector3,
)

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-10
FRAME_TOL = 1e-12

Vector = Sequence[float] | np.ndarray


def _frozen(v: np.ndarray) -> np.ndarray:
    out = np.array(v, dtype=float)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Frame:
    """Right-handed orthonormal triad (x, y, z) in lab coordinates."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, _frozen(require_vector3(getattr(self, name), f"frame.{name}")))
        assert_orthonormal_frame(self.x, self.y, self.z, "frame", tol=FRAME_TOL)

    @classmethod
    def from_zy(cls, z: np.ndarray, y: np.ndarray) -> "Frame":
        """Build a frame from z and an (almost) perpendicular y, cleaning y against z."""
        z = z / np.linalg.norm(z)
        y = y - np.dot(y, z) * z
        y = y / np.linalg.norm(y)
        return cls(x=np.cross(y, z), y=y, z=z)

    def matrix(self) -> np.ndarray:
        """Columns are the frame axes."""
        return np.column_stack([self.x, self.y, self.z])

    def rotated(self, r: Rotor) -> "Frame":
        """The frame carried along by the SO(3) action of r."""
        return Frame.from_zy(rotate_vector(r, self.z), rotate_vector(r, self.y))

    def isclose(self, other: "Frame", atol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.matrix() - other.matrix())) <= atol)

    def to_dict(self) -> dict[str, list[float]]:
        return {"x": self.x.tolist(), "y": self.y.tolist(), "z": self.z.tolist()}


@dataclass(frozen=True, eq=False)
class PairGeometry:
    """Two unit vectors with their bisector k and half-angle theta."""

    v_a: np.ndarray
    v_b: np.ndarray
    k: np.ndarray
    theta: float

    @property
    def cross_norm(self) -> float:
        return float(np.linalg.norm(np.cross(self.v_a, self.v_b - self.v_a)))

    @property
    def is_coincident(self) -> bool:
        return self.cross_norm <= DEGENERACY_TOL

    def to_dict(self) -> dict[str, object]:
        return {
            "v_a": self.v_a.tolist(),
            "v_b": self.v_b.tolist(),
            "k": self.k.tolist(),
            "theta": float(self.theta),
        }


# ---------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------

def pair_geometry(v_a: Vector, v_b: Vector) -> PairGeometry:
    """Bisector and half-angle of two unit vectors (antiparallel is an error)."""
    a = require_unit_vector(v_a, "v_a")
    b = require_unit_vector(v_b, "v_b")

    dot = float(np.dot(a, b))
    if dot <= -1.0 + DEGENERACY_TOL:
        raise DegenerateGeometryError("[pair_geometry] antiparallel vectors have no bisector")

    s = a + b
    k = s / np.linalg.norm(s)
    # atan2 keeps the small-angle half of the range accurate where arccos does not.
    sin_ab = float(np.linalg.norm(np.cross(a, b - a)))
    theta = 0.5 * math.atan2(sin_ab, dot)
    return PairGeometry(v_a=_frozen(a), v_b=_frozen(b), k=_frozen(k), theta=theta)


def _y_axis(v_c: np.ndarray, v_o: np.ndarray) -> np.ndarray:
    """Normalised v_c x v_o, computed as v_c x (v_o - v_c) for nearly coincident pairs."""
    c = np.cross(v_c, v_o - v_c)
    n = float(np.linalg.norm(c))
    if n <= DEGENERACY_TOL:
        raise DegenerateGeometryError(
            "[frames] coincident vectors need an explicit azimuth hint (use limit_frames)"
        )
    return c / n


def parallel_frames(v_a: Vector, v_b: Vector) -> tuple[Frame, Frame]:
    """Each particle's frame with z along its own vector."""
    g = pair_geometry(v_a, v_b)
    frames = []
    for v_c, v_o in ((g.v_a, g.v_b), (g.v_b, g.v_a)):
        frames.append(Frame.from_zy(v_c, _y_axis(v_c, v_o)))
    return frames[0], frames[1]


def bisecting_frames(
    v_a: Vector,
    v_b: Vector,
    azimuth_hint: Vector | None = None,
) -> tuple[Frame, Frame]:
    """
    Each particle's frame with z along the bisector k.

    For coincident vectors the frames are only defined through an azimuth
    hint; passing one routes the call to limit_frames. A hint is ignored when
    the vectors are distinct.
    """
    g = pair_geometry(v_a, v_b)
    if g.is_coincident:
        if azimuth_hint is None:
            raise DegenerateGeometryError(
                "[bisecting_frames] coincident vectors need an explicit azimuth hint"
            )
        logger.debug("bisecting_frames: coincident vectors, using azimuth hint %s", list(azimuth_hint))
        return limit_frames(g.k, azimuth_hint)

    frames = []
    for v_c, v_o in ((g.v_a, g.v_b), (g.v_b, g.v_a)):
        frames.append(Frame.from_zy(g.k, _y_axis(v_c, v_o)))
    return frames[0], frames[1]


def limit_frames(v: Vector, azimuth_hint: Vector) -> tuple[Frame, Frame]:
    """Bisecting frames in the coincident limit: y_a = hint, y_b = -hint."""
    z = require_unit_vector(v, "v")
    hint = require_unit_vector(azimuth_hint, "azimuth_hint")
    require_perpendicular(z, hint, "azimuth_hint and v")
    frame_a = Frame.from_zy(z, hint)
    frame_b = Frame.from_zy(z, -frame_a.y)
    return frame_a, frame_b


def relating_rotor(g: PairGeometry, sign: int) -> Rotor:
    """R_ab = a pi turn about k in the given sense; maps v_a to v_b and B_a onto B_b."""
    if sign not in (1, -1):
        raise DomainError(f"[sign] must be +1 or -1, got {sign!r}")
    return from_axis_angle(g.k, sign * math.pi)


def bisecting_offset(v_a: Vector, v_b: Vector) -> tuple[Rotor, Rotor]:
    """
    Rotors taking each parallel frame onto the matching bisecting frame.

    Both are a turn by +theta about the particle's own y-axis, i.e. the same
    rotation expressed in each particle's frame.
    """
    g = pair_geometry(v_a, v_b)
    par_a, par_b = parallel_frames(g.v_a, g.v_b)
    return from_axis_angle(par_a.y, g.theta), from_axis_angle(par_b.y, g.theta)


def perpendicular_axis(v: Vector) -> np.ndarray:
    """Deterministic unit vector perpendicular to v (lab axis least aligned with v, projected)."""
    u = require_vector3(v, "v")
    n = float(np.linalg.norm(u))
    if n == 0.0:
        raise DomainError("[v] zero vector has no perpendicular direction")
    u = u / n
    e = np.eye(3)[int(np.argmin(np.abs(u)))]
    h = e - np.dot(e, u) * u
    return h / np.linalg.norm(h)

"""
Half-integer bookkeeping and SU(2) rotors.

Why this exists:
- A 3x3 rotation matrix cannot tell a 2*pi turn from no turn at all; a unit
  quaternion can. Every phase in this package that depends on (-1)^(2s)
  flows through the rotor sign kept here.
- Spins are stored as twice their value so that 2s parity is integer
  arithmetic, never a float comparison.

Conventions:
- Rotor(w, x, y, z) = cos(a/2) + sin(a/2) (n_x i + n_y j + n_z k).
- Angles are never reduced modulo 2*pi: from_axis_angle(n, 2*pi) is the
  rotor (-1, 0, 0, 0), which is a different value from the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Protocol, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from src.errors import DomainError
from src.validation.checks import require_vector3

ROTOR_NORM_TOL = 1e-12
AXIS_NORM_TOL = 1e-12


# ---------------------------------------------------------------------
# Half-integers
# ---------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class HalfSpin:
    """A spin magnitude s or a component m, stored as the integer 2s (2m)."""

    twice: int

    def __post_init__(self) -> None:
        if isinstance(self.twice, bool) or not isinstance(self.twice, (int, np.integer)):
            raise DomainError(f"[HalfSpin] twice must be an integer, got {self.twice!r}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def parse(cls, text: str | int | float | Fraction) -> "HalfSpin":
        """Parse "3/2", "-1/2", "1", 0.5 or Fraction(3, 2)."""
        try:
            value = Fraction(str(text).strip()) if not isinstance(text, Fraction) else text
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"[HalfSpin] cannot parse {text!r}") from exc
        doubled = 2 * value
        if doubled.denominator != 1:
            raise DomainError(f"[HalfSpin] {text!r} is not a multiple of 1/2")
        return cls(int(doubled))

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integral(self) -> bool:
        return self.twice % 2 == 0

    @property
    def exchange_sign(self) -> int:
        """(-1)^(2s)."""
        return 1 if self.is_integral else -1

    @property
    def multiplicity(self) -> int:
        """2s + 1 (only meaningful for magnitudes)."""
        return self.twice + 1

    def require_magnitude(self, name: str = "s") -> "HalfSpin":
        if self.twice < 0:
            raise DomainError(f"[{name}] spin magnitude must be >= 0, got {self}")
        return self

    def components(self) -> list["HalfSpin"]:
        """m = s, s-1, ..., -s (the fixed index order used for all matrices)."""
        self.require_magnitude()
        return [HalfSpin(self.twice - 2 * i) for i in range(self.twice + 1)]

    def is_component_of(self, s: "HalfSpin") -> bool:
        return s.twice >= 0 and abs(self.twice) <= s.twice and (s.twice - self.twice) % 2 == 0

    def index_in(self, s: "HalfSpin") -> int:
        """Row/column index of this component in a spin-s matrix."""
        require_component(s, self)
        return (s.twice - self.twice) // 2

    def __add__(self, other: "HalfSpin") -> "HalfSpin":
        return HalfSpin(self.twice + other.twice)

    def __neg__(self) -> "HalfSpin":
        return HalfSpin(-self.twice)

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def require_component(s: HalfSpin, m: HalfSpin, name: str = "m") -> None:
    """Assert that m is a valid component of s."""
    s.require_magnitude()
    if not m.is_component_of(s):
        raise DomainError(f"[{name}] {m} is not a valid component of spin {s}")


# ---------------------------------------------------------------------
# Rotors
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class Rotor:
    """Unit quaternion (w, x, y, z); an element of SU(2)."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        comps = (self.w, self.x, self.y, self.z)
        if not all(math.isfinite(c) for c in comps):
            raise DomainError(f"[Rotor] non-finite component in {comps}")
        n2 = sum(c * c for c in comps)
        if abs(n2 - 1.0) > ROTOR_NORM_TOL:
            raise DomainError(f"[Rotor] not a unit quaternion (|q|^2 = {n2:.17g})")
        for field_name, c in zip("wxyz", comps):
            object.__setattr__(self, field_name, float(c))

    @classmethod
    def from_array(cls, q: Sequence[float] | np.ndarray, renormalize: bool = True) -> "Rotor":
        arr = np.asarray(q, dtype=float)
        if renormalize:
            n = float(np.linalg.norm(arr))
            if n == 0.0 or not math.isfinite(n):
                raise DomainError("[Rotor] cannot normalise a zero quaternion")
            arr = arr / n
        return cls(*(float(c) for c in arr))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def to_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "Rotor":
        # The other SU(2) lift of the same SO(3) rotation.
        return Rotor(-self.w, -self.x, -self.y, -self.z)

    def __iter__(self) -> Iterator[float]:
        return iter((self.w, self.x, self.y, self.z))


IDENTITY = Rotor(1.0, 0.0, 0.0, 0.0)
TWO_PI = Rotor(-1.0, 0.0, 0.0, 0.0)


def from_axis_angle(axis: Sequence[float] | np.ndarray, angle: float) -> Rotor:
    """
    Rotor for a rotation by `angle` (radians, any real) about a unit axis.

    The angle is not reduced: (n, 2*pi) gives (-1, 0, 0, 0).
    """
    n = require_vector3(axis, "axis")
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > AXIS_NORM_TOL:
        raise DomainError(f"[axis] is not a unit vector (|axis| = {norm:.17g})")
    if not math.isfinite(angle):
        raise DomainError(f"[angle] must be finite, got {angle!r}")
    n = n / norm
    half = 0.5 * float(angle)
    s = math.sin(half)
    return Rotor.from_array([math.cos(half), s * n[0], s * n[1], s * n[2]])


def compose(a: Rotor, b: Rotor) -> Rotor:
    """Quaternion product a*b (apply b first, then a), renormalised."""
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    return Rotor.from_array([w, x, y, z])


def compose_all(*rotors: Rotor) -> Rotor:
    """compose(r1, compose(r2, ...)); the rightmost rotor acts first."""
    out = IDENTITY
    for r in rotors:
        out = compose(out, r)
    return out


def inverse(r: Rotor) -> Rotor:
    """Conjugate quaternion."""
    return Rotor(r.w, -r.x, -r.y, -r.z)


def rotate_vector(r: Rotor, v: Sequence[float] | np.ndarray) -> np.ndarray:
    """SO(3) action v -> q v q^-1 (insensitive to the sign of q)."""
    vec = np.asarray(v, dtype=float)
    u = r.vector
    t = 2.0 * np.cross(u, vec)
    return vec + r.w * t + np.cross(u, t)


def as_matrix(r: Rotor) -> np.ndarray:
    """3x3 SO(3) projection of a rotor."""
    return np.column_stack([rotate_vector(r, e) for e in np.eye(3)])


def rotor_isclose(a: Rotor, b: Rotor, atol: float = 1e-12) -> bool:
    """Component-wise comparison; a and -a are NOT close."""
    return bool(np.max(np.abs(a.as_array() - b.as_array())) <= atol)


class _Triad(Protocol):
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


def frame_rotor(frame: _Triad) -> Rotor:
    """
    Deterministic SU(2) lift of the rotation taking the lab axes onto a frame.

    The lift is chosen with w >= 0 (ties broken by the first nonzero
    component being positive), so the same frame always yields the same rotor.
    """
    m = np.column_stack([frame.x, frame.y, frame.z])
    qx, qy, qz, qw = Rotation.from_matrix(m).as_quat()
    q = np.array([qw, qx, qy, qz])
    nonzero = q[np.abs(q) > 1e-15]
    if nonzero.size and nonzero[0] < 0:
        q = -q
    return Rotor.from_array(q)


def random_rotor(rng: np.random.Generator) -> Rotor:
    """Uniformly distributed element of SU(2)."""
    while True:
        q = rng.normal(size=4)
        n = float(np.linalg.norm(q))
        if n > 1e-8:
            return Rotor.from_array(q / n)


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed direction on the unit sphere."""
    while True:
        v = rng.normal(size=3)
        n = float(np.linalg.norm(v))
        if n > 1e-8:
            return v / n

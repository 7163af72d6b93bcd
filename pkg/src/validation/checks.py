"""
Numeric guard checks for vectors, frames and matrices.

Why this exists:
- Converts "the rotor is probably unit" into an enforced precondition.
- Gives an immediate, readable failure ("[axis] ...") instead of a wrong
  phase three modules later.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import DomainError


@dataclass(frozen=True)
class CheckResult:
    """Non-fatal result of one invariant check (used by `verify`)."""
    name: str
    ok: bool
    max_dev: float
    message: str = ""


def assert_finite(v: Sequence[float] | np.ndarray, name: str = "vector") -> np.ndarray:
    """Return `v` as a float array, failing on NaN/inf entries."""
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"[{name}] contains non-finite values: {arr.tolist()}")
    return arr


def require_vector3(v: Sequence[float] | np.ndarray, name: str = "vector") -> np.ndarray:
    """Return `v` as a finite 3-vector."""
    arr = assert_finite(v, name)
    if arr.shape != (3,):
        raise DomainError(f"[{name}] expected a 3-vector, got shape {arr.shape}")
    return arr


def require_unit_vector(
    v: Sequence[float] | np.ndarray,
    name: str = "vector",
    tol: float = 1e-10,
) -> np.ndarray:
    """
    Assert that a 3-vector has unit length.

    Returns the vector renormalised, so callers get an exactly-unit copy
    once the tolerance check has passed.
    """
    arr = require_vector3(v, name)
    n = float(np.linalg.norm(arr))
    if abs(n - 1.0) > tol:
        raise DomainError(f"[{name}] is not a unit vector (|v| = {n:.17g})")
    return arr / n


def require_perpendicular(
    u: np.ndarray,
    v: np.ndarray,
    name: str = "vectors",
    tol: float = 1e-10,
) -> None:
    """Assert u . v = 0 within tol."""
    dot = float(np.dot(u, v))
    if abs(dot) > tol:
        raise DomainError(f"[{name}] are not perpendicular (dot = {dot:.3e})")


def assert_orthonormal_frame(
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    name: str = "frame",
    tol: float = 1e-12,
) -> None:
    """Assert a right-handed orthonormal triad."""
    m = np.column_stack([x, y, z])
    dev = float(np.max(np.abs(m.T @ m - np.eye(3))))
    if dev > tol:
        raise DomainError(f"[{name}] axes are not orthonormal (max dev {dev:.3e})")
    handed = float(np.max(np.abs(np.cross(x, y) - z)))
    if handed > tol:
        raise DomainError(f"[{name}] is not right-handed (|x*y - z| = {handed:.3e})")


def unitarity_deviation(m: np.ndarray) -> float:
    """Max-entry deviation of M^dagger M from the identity."""
    m = np.asarray(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def assert_unitary(m: np.ndarray, name: str = "matrix", tol: float = 1e-10) -> None:
    """Assert that a square matrix is unitary within tol."""
    dev = unitarity_deviation(m)
    if dev > tol:
        raise DomainError(f"[{name}] is not unitary (max dev {dev:.3e})")

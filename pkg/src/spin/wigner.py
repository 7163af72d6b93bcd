"""
Spin-s representation matrices D^s(R) on SU(2).

Why this exists:
- dmatrix is built from the 2x2 SU(2) matrix by its action on degree-2s
  homogeneous polynomials, so it is a true representation of SU(2):
  D(-1) = (-1)^(2s) I falls out with no Euler-angle branch cuts.
- little_d is the classic factorial-sum formula, kept as an independent
  cross-check for dmatrix.

Rows and columns are indexed m = s, s-1, ..., -s.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import factorial

from src.errors import DomainError
from src.spin.rotor import HalfSpin, Rotor, require_component

# Factorials are evaluated in floating point; 2s = 10 keeps every term exact.
MAX_TWICE_SPIN = 10


def require_spin_cap(s: HalfSpin, name: str = "s") -> None:
    s.require_magnitude(name)
    if s.twice > MAX_TWICE_SPIN:
        raise DomainError(f"[{name}] spin {s} exceeds the supported maximum {MAX_TWICE_SPIN}/2")


def su2_matrix(r: Rotor) -> np.ndarray:
    """Fundamental 2x2 matrix of a rotor, rows/cols m = +1/2, -1/2."""
    return np.array(
        [
            [complex(r.w, -r.z), complex(-r.y, -r.x)],
            [complex(r.y, -r.x), complex(r.w, r.z)],
        ]
    )


def _binomial_power(first: complex, second: complex, power: int) -> np.ndarray:
    """Coefficients of (first*xi + second*eta)^power, indexed by the eta power."""
    out = np.array([1.0 + 0.0j])
    for _ in range(power):
        out = np.convolve(out, np.array([first, second]))
    return out


def dmatrix(s: HalfSpin, r: Rotor) -> np.ndarray:
    """
    D^s(r) as a (2s+1) x (2s+1) complex matrix.

    Basis vector |s, m> is the monomial xi^(s+m) eta^(s-m) / sqrt((s+m)! (s-m)!),
    and the rotor acts by xi -> a xi + c eta, eta -> b xi + d eta with
    [[a, b], [c, d]] = su2_matrix(r).
    """
    require_spin_cap(s)
    n = s.twice
    (a, b), (c, d) = su2_matrix(r)

    norms = np.sqrt(factorial(np.arange(n, -1, -1)) * factorial(np.arange(0, n + 1)))
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for col in range(n + 1):
        coeffs = np.convolve(_binomial_power(a, c, n - col), _binomial_power(b, d, col))
        out[:, col] = coeffs * norms / norms[col]
    return out


def little_d(s: HalfSpin, m_prime: HalfSpin, m: HalfSpin, beta: float) -> float:
    """Wigner small-d element d^s_{m'm}(beta) from the factorial sum."""
    require_spin_cap(s)
    require_component(s, m_prime, "m_prime")
    require_component(s, m)

    # Integer arguments j+m etc. from twice-values.
    jpm = (s.twice + m.twice) // 2
    jmm = (s.twice - m.twice) // 2
    jpmp = (s.twice + m_prime.twice) // 2
    jmmp = (s.twice - m_prime.twice) // 2
    delta = (m_prime.twice - m.twice) // 2

    pref = math.sqrt(
        math.factorial(jpmp) * math.factorial(jmmp) * math.factorial(jpm) * math.factorial(jmm)
    )
    c = math.cos(0.5 * beta)
    sn = math.sin(0.5 * beta)

    total = 0.0
    for k in range(max(0, -delta), min(jpm, jmmp) + 1):
        denom = (
            math.factorial(jpm - k)
            * math.factorial(k)
            * math.factorial(jmmp - k)
            * math.factorial(k + delta)
        )
        sign = -1.0 if (k + delta) % 2 else 1.0
        total += sign * c ** (s.twice - 2 * k - delta) * sn ** (2 * k + delta) / denom
    return pref * total


def little_d_matrix(s: HalfSpin, beta: float) -> np.ndarray:
    """Full d^s(beta) matrix in the same index order as dmatrix."""
    comps = s.components()
    return np.array([[little_d(s, mp, m, beta) for m in comps] for mp in comps])

"""
Single-particle state vectors |Q, p, s, m> in canonical (null-rotation) form.

Why this exists:
- A ket described with a nontrivial spin-frame rotor is expanded immediately
  into null-rotation kets with D^s amplitudes. Two descriptions of the same
  state therefore produce the same term map, and the 2*pi sign of the rotor
  ends up in the amplitudes instead of being forgotten.
- phase_ratio turns "these two descriptions are the same ray" into a
  checked number, which is how every exchange phase in the package is read
  off.

Terms whose momenta agree within 1e-10 are merged; intrinsic labels Q,
spin and component are compared exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from src.errors import DomainError, NotARayError
from src.spin.rotor import (
    IDENTITY,
    HalfSpin,
    Rotor,
    from_axis_angle,
    inverse,
    require_component,
    rotate_vector,
)
from src.spin.wigner import dmatrix
from src.validation.checks import require_vector3

logger = logging.getLogger(__name__)

MOMENTUM_TOL = 1e-10
AMPLITUDE_FLOOR = 1e-14
RAY_TOL = 1e-8

QLabels = tuple[tuple[str, Any], ...]
QInput = Mapping[str, Any] | Sequence[tuple[str, Any]] | None


def normalize_q(q: QInput) -> QLabels:
    """Intrinsic labels as an ordered tuple of (name, value) pairs."""
    if q is None:
        return ()
    items = q.items() if isinstance(q, Mapping) else q
    return tuple((str(name), value) for name, value in items)


def momenta_match(p: Sequence[float], q: Sequence[float], tol: float = MOMENTUM_TOL) -> bool:
    return all(abs(a - b) <= tol for a, b in zip(p, q))


# ---------------------------------------------------------------------
# Kets and term maps
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class KetLabel:
    """|Q, p, s, m(N)>: a canonical single-particle basis ket."""

    Q: QLabels
    p: tuple[float, float, float]
    s: HalfSpin
    m: HalfSpin

    def __post_init__(self) -> None:
        require_component(self.s, self.m)
        object.__setattr__(self, "p", tuple(float(c) for c in require_vector3(self.p, "p")))

    @property
    def discrete_key(self) -> tuple[QLabels, int, int]:
        return (self.Q, self.s.twice, self.m.twice)

    def matches(self, other: "KetLabel", tol: float = MOMENTUM_TOL) -> bool:
        return self.discrete_key == other.discrete_key and momenta_match(self.p, other.p, tol)

    def with_momentum(self, p: Sequence[float]) -> "KetLabel":
        return KetLabel(self.Q, tuple(p), self.s, self.m)


class TermIndex:
    """
    Insertion-ordered accumulator of (label, amplitude) with tolerant momentum merge.

    Labels are bucketed on their exact discrete part, so only momenta inside
    one bucket are compared against each other.
    """

    def __init__(self) -> None:
        self._buckets: dict[Any, list[list[Any]]] = {}
        self._order: list[list[Any]] = []

    @staticmethod
    def _split(label: Any) -> tuple[Any, tuple[float, ...]]:
        if isinstance(label, KetLabel):
            return label.discrete_key, label.p
        # Ordered pair of KetLabels.
        first, second = label
        return (first.discrete_key, second.discrete_key), first.p + second.p

    def find(self, label: Any) -> list[Any] | None:
        key, p = self._split(label)
        for entry in self._buckets.get(key, ()):
            if momenta_match(entry[1], p):
                return entry
        return None

    def add(self, label: Any, amplitude: complex) -> None:
        entry = self.find(label)
        if entry is None:
            key, p = self._split(label)
            entry = [label, p, 0j]
            self._buckets.setdefault(key, []).append(entry)
            self._order.append(entry)
        entry[2] += complex(amplitude)

    def get(self, label: Any) -> complex:
        entry = self.find(label)
        return 0j if entry is None else entry[2]

    def items(self, floor: float = AMPLITUDE_FLOOR) -> list[tuple[Any, complex]]:
        return [(e[0], e[2]) for e in self._order if abs(e[2]) >= floor]


def terms_equal(a: Iterable[tuple[Any, complex]], b: Iterable[tuple[Any, complex]], atol: float = 0.0) -> bool:
    """Compare two term maps irrespective of listing order; a missing term counts as zero."""
    ia, ib = TermIndex(), TermIndex()
    for label, amp in a:
        ia.add(label, amp)
    for label, amp in b:
        ib.add(label, amp)
    for label, amp in ia.items(floor=0.0):
        if abs(amp - ib.get(label)) > atol:
            return False
    for label, amp in ib.items(floor=0.0):
        if ia.find(label) is None and abs(amp) > atol:
            return False
    return True


@dataclass(frozen=True, eq=False)
class StateVector:
    """Finite superposition of canonical kets; equality is term-map equality."""

    terms: tuple[tuple[KetLabel, complex], ...] = ()

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return terms_equal(self.terms, other.terms)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[KetLabel, complex]]) -> "StateVector":
        idx = TermIndex()
        for label, amp in terms:
            idx.add(label, amp)
        return cls(tuple(idx.items()))

    def __iter__(self) -> Iterator[tuple[KetLabel, complex]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def labels(self) -> list[KetLabel]:
        return [label for label, _ in self.terms]

    def amplitude(self, label: KetLabel) -> complex:
        for lab, amp in self.terms:
            if lab.matches(label):
                return amp
        return 0j

    def amplitudes(self) -> np.ndarray:
        return np.array([amp for _, amp in self.terms], dtype=complex)


def inner_product(u: StateVector, v: StateVector) -> complex:
    """<u|v>, conjugate-linear in u."""
    idx = TermIndex()
    for label, amp in u:
        idx.add(label, amp)
    return complex(sum(np.conj(idx.get(label)) * amp for label, amp in v))


def norm(v: StateVector) -> float:
    return math.sqrt(sum(abs(a) ** 2 for _, a in v))


def scale(v: StateVector, c: complex) -> StateVector:
    return StateVector.from_terms((label, c * amp) for label, amp in v)


def add(u: StateVector, v: StateVector) -> StateVector:
    return StateVector.from_terms([*u.terms, *v.terms])


def phase_ratio(u: StateVector, v: StateVector, tol: float = RAY_TOL) -> complex:
    """
    The unimodular c with u = c v.

    Raises NotARayError when u and v are not proportional or the factor is
    not of modulus one.
    """
    vv = inner_product(v, v).real
    nu = norm(u)
    if vv <= AMPLITUDE_FLOOR**2 or nu <= AMPLITUDE_FLOOR:
        raise NotARayError("[phase_ratio] zero vector has no phase")
    c = inner_product(v, u) / vv
    residual = norm(add(u, scale(v, -c))) / nu
    if residual > tol:
        raise NotARayError(f"[phase_ratio] vectors are not proportional (relative residual {residual:.3e})")
    if abs(abs(c) - 1.0) > tol:
        raise NotARayError(f"[phase_ratio] proportionality factor is not unimodular (|c| = {abs(c):.12g})")
    return c


# ---------------------------------------------------------------------
# Construction and the rotation action
# ---------------------------------------------------------------------

def make_ket(
    Q: QInput,
    p: Sequence[float],
    s: HalfSpin,
    m: HalfSpin,
    frame_rotor: Rotor = IDENTITY,
) -> StateVector:
    """|Q, p, s, m(R)> expanded as sum_m' D^s_{m'm}(R) |Q, p, s, m'(N)>."""
    require_component(s, m)
    q = normalize_q(Q)
    mom = tuple(require_vector3(p, "p"))
    d = dmatrix(s, frame_rotor)
    col = m.index_in(s)
    return StateVector.from_terms(
        (KetLabel(q, mom, s, mp), d[row, col]) for row, mp in enumerate(s.components())
    )


def canonical_ket(Q: QInput, p: Sequence[float], s: HalfSpin, m: HalfSpin) -> StateVector:
    return make_ket(Q, p, s, m, IDENTITY)


def apply_rotation(r: Rotor, v: StateVector) -> StateVector:
    """U(r): rotate every momentum and mix components with D^s(r)."""
    cache: dict[int, np.ndarray] = {}
    out: list[tuple[KetLabel, complex]] = []
    for label, amp in v:
        d = cache.get(label.s.twice)
        if d is None:
            d = cache[label.s.twice] = dmatrix(label.s, r)
        p_new = tuple(rotate_vector(r, label.p))
        col = label.m.index_in(label.s)
        for row, mpp in enumerate(label.s.components()):
            out.append((KetLabel(label.Q, p_new, label.s, mpp), d[row, col] * amp))
    return StateVector.from_terms(out)


def standard_rotation_to(p_hat: Sequence[float]) -> Rotor:
    """
    Rotor taking z onto the direction p_hat.

    A turn about z x p_hat by the polar angle; identity for +z, and by
    convention a pi turn about y for -z.
    """
    v = require_vector3(p_hat, "p_hat")
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise DomainError("[p_hat] zero vector has no direction")
    v = v / n
    axis = np.array([-v[1], v[0], 0.0])
    sin_polar = float(np.linalg.norm(axis))
    if sin_polar <= 1e-15:
        return IDENTITY if v[2] > 0 else from_axis_angle([0.0, 1.0, 0.0], math.pi)
    return from_axis_angle(axis / sin_polar, math.atan2(sin_polar, v[2]))


def helicity_ket(Q: QInput, p: Sequence[float], s: HalfSpin, helicity: HalfSpin) -> StateVector:
    """Spin quantised along the momentum direction."""
    mom = require_vector3(p, "p")
    if float(np.linalg.norm(mom)) == 0.0:
        raise DomainError("[p] helicity is undefined at zero momentum")
    return make_ket(Q, mom, s, helicity, standard_rotation_to(mom))


def canonical_from_helicity(Q: QInput, p: Sequence[float], s: HalfSpin, m: HalfSpin) -> StateVector:
    """|p, m>^C = sum_lambda D^s_{lambda m}(R(p -> z)) |p, lambda>^H."""
    require_component(s, m)
    back = inverse(standard_rotation_to(p))
    d = dmatrix(s, back)
    col = m.index_in(s)
    terms: list[tuple[KetLabel, complex]] = []
    for row, lam in enumerate(s.components()):
        terms.extend((label, d[row, col] * amp) for label, amp in helicity_ket(Q, p, s, lam))
    return StateVector.from_terms(terms)


def boost(p_new: Sequence[float], v: StateVector) -> StateVector:
    """Relabel the (single) momentum of v; spin content is untouched."""
    target = tuple(require_vector3(p_new, "p_new"))
    momenta = [label.p for label, _ in v]
    if momenta and not all(momenta_match(momenta[0], q) for q in momenta[1:]):
        raise DomainError("[boost] state has more than one momentum label")
    return StateVector.from_terms((label.with_momentum(target), amp) for label, amp in v)

"""
Two-particle state vectors: symmetrisation, permutation, exchange.

Why this exists:
- permute and exchange are different operations. permute reorders the
  listing of a symmetrised state and always gives eigenvalue +1. exchange
  swaps which particle is labelled "1" and rebuilds the state under the same
  labelling conventions, so it can pick up a phase.
- In the labelled common-frame construction particle "2" is reached from
  particle "1" through a fixed pi turn R_co about the bisector. Swapping the
  labels changes that path by a full 2*pi turn, and D^s(2*pi) = (-1)^(2s)
  is the exchange phase.

Frame bookkeeping (anchor = canonically first particle description):
- R^F = F * G_a^-1 carries the anchor's bisecting frame B_a onto the common
  frame F, and K(theta) is the turn about the bisector k.
- Reference transports are tau0_a = R^F and tau0_b = R^F * K(+pi). Each
  particle's spin frame rotor is tau_c * tau0_c^-1 * F * beta_c, where beta_c
  is the identity (canonical basis) or the standard rotation onto the
  momentum direction seen from F (helicity basis).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Iterable, Iterator, Sequence

import numpy as np
from scipy.special import comb

from src.errors import DomainError, NotARayError, PhaseConsistencyError
from src.geometry.frames import bisecting_frames, pair_geometry
from src.quantum.states import (
    AMPLITUDE_FLOOR,
    KetLabel,
    QLabels,
    RAY_TOL,
    StateVector,
    TermIndex,
    terms_equal,
    inner_product,
    make_ket,
    momenta_match,
    normalize_q,
    phase_ratio,
    standard_rotation_to,
)
from src.quantum.states import norm as ket_norm
from src.spin.rotor import (
    IDENTITY,
    HalfSpin,
    Rotor,
    compose,
    compose_all,
    frame_rotor,
    from_axis_angle,
    inverse,
    require_component,
    rotate_vector,
)
from src.validation.checks import require_vector3

logger = logging.getLogger(__name__)

BASES = ("canonical", "helicity")
LABELED = "labeled"
SYMMETRIC = "symmetric"
EXCHANGE_TOL = 1e-10

PairLabel = tuple[KetLabel, KetLabel]


# ---------------------------------------------------------------------
# Particle descriptions
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class ParticleSpec:
    """One particle's description: labels Q, momentum p, spin s, m or helicity, basis."""

    Q: QLabels
    p: tuple[float, float, float]
    s: HalfSpin
    spin_quantum: HalfSpin
    basis: str = "canonical"

    def __post_init__(self) -> None:
        object.__setattr__(self, "Q", normalize_q(self.Q))
        object.__setattr__(self, "p", tuple(float(c) for c in require_vector3(self.p, "p")))
        require_component(self.s, self.spin_quantum, "spin_quantum")
        if self.basis not in BASES:
            raise DomainError(f"[basis] must be one of {BASES}, got {self.basis!r}")
        if self.basis == "helicity" and not any(self.p):
            raise DomainError("[p] helicity basis needs a nonzero momentum")

    @property
    def direction(self) -> np.ndarray:
        v = np.asarray(self.p, dtype=float)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise DomainError("[p] zero momentum has no direction for the pair frames")
        return v / n

    def with_spin_quantum(self, mu: HalfSpin) -> "ParticleSpec":
        return replace(self, spin_quantum=mu)


def _cmp(x: Any, y: Any) -> int:
    return (x > y) - (x < y)


def compare_descriptions(a: ParticleSpec, b: ParticleSpec) -> int:
    """
    Total order on descriptions: Q, then momentum (within tolerance), then s,
    then spin quantum descending, then basis. 0 means identical descriptions.
    """
    qa = tuple((n, repr(v)) for n, v in a.Q)
    qb = tuple((n, repr(v)) for n, v in b.Q)
    if qa != qb:
        return _cmp(qa, qb)
    if not momenta_match(a.p, b.p):
        for x, y in zip(a.p, b.p):
            if abs(x - y) > 1e-10:
                return _cmp(x, y)
    for key_a, key_b in (
        (a.s.twice, b.s.twice),
        (-a.spin_quantum.twice, -b.spin_quantum.twice),
        (a.basis, b.basis),
    ):
        if key_a != key_b:
            return _cmp(key_a, key_b)
    return 0


# ---------------------------------------------------------------------
# Two-particle term maps
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class LabelMeta:
    """Which description is particle "1", the sense of R_co, and the common frame F."""

    first: ParticleSpec
    second: ParticleSpec
    sign: int
    frame: Rotor
    azimuth_hint: tuple[float, float, float] | None = None
    kind: str = LABELED

    def swapped(self) -> "LabelMeta":
        return replace(self, first=self.second, second=self.first)


@dataclass(frozen=True, eq=False)
class TwoParticleState:
    """Amplitudes over ordered pairs of canonical kets; equality ignores listing order and meta."""

    terms: tuple[tuple[PairLabel, complex], ...] = ()
    meta: LabelMeta | None = None

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TwoParticleState):
            return NotImplemented
        return terms_equal(self.terms, other.terms)

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[tuple[PairLabel, complex]],
        meta: LabelMeta | None = None,
    ) -> "TwoParticleState":
        idx = TermIndex()
        for pair, amp in terms:
            idx.add(pair, amp)
        return cls(tuple(idx.items()), meta)

    def __iter__(self) -> Iterator[tuple[PairLabel, complex]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def amplitude(self, first: KetLabel, second: KetLabel) -> complex:
        for (k1, k2), amp in self.terms:
            if k1.matches(first) and k2.matches(second):
                return amp
        return 0j

    @property
    def is_zero(self) -> bool:
        return not self.terms


def two_particle_inner(t: TwoParticleState, u: TwoParticleState) -> complex:
    """<t|u>, conjugate-linear in t."""
    idx = TermIndex()
    for pair, amp in t:
        idx.add(pair, amp)
    return complex(sum(np.conj(idx.get(pair)) * amp for pair, amp in u))


def norm(t: TwoParticleState) -> float:
    return math.sqrt(sum(abs(a) ** 2 for _, a in t))


def combine(
    parts: Iterable[tuple[complex, TwoParticleState]],
    meta: LabelMeta | None = None,
) -> TwoParticleState:
    """Linear combination sum_i c_i t_i."""
    return TwoParticleState.from_terms(
        ((pair, c * amp) for c, t in parts for pair, amp in t), meta
    )


def state_phase_ratio(t: TwoParticleState, u: TwoParticleState, tol: float = RAY_TOL) -> complex:
    """Unimodular c with t = c u (NotARayError otherwise)."""
    uu = two_particle_inner(u, u).real
    nt = norm(t)
    if uu <= AMPLITUDE_FLOOR**2 or nt <= AMPLITUDE_FLOOR:
        raise NotARayError("[state_phase_ratio] zero state has no phase")
    c = two_particle_inner(u, t) / uu
    residual = norm(combine([(1.0, t), (-c, u)])) / nt
    if residual > tol:
        raise NotARayError(
            f"[state_phase_ratio] states are not proportional (relative residual {residual:.3e})"
        )
    if abs(abs(c) - 1.0) > tol:
        raise NotARayError(f"[state_phase_ratio] factor is not unimodular (|c| = {abs(c):.12g})")
    return c


# ---------------------------------------------------------------------
# Symmetrisation and permutation
# ---------------------------------------------------------------------

def symmetrize(u: StateVector, v: StateVector, meta: LabelMeta | None = None) -> TwoParticleState:
    """alpha (u x v + v x u), alpha = 1 / sqrt(2 + 2 |<u,v>|^2)."""
    if ket_norm(u) <= AMPLITUDE_FLOOR or ket_norm(v) <= AMPLITUDE_FLOOR:
        raise DomainError("[symmetrize] cannot symmetrise a zero vector")

    labels = StateVector.from_terms([(lab, 1.0) for lab in (*u.labels(), *v.labels())]).labels()
    ua = np.array([u.amplitude(lab) for lab in labels], dtype=complex)
    va = np.array([v.amplitude(lab) for lab in labels], dtype=complex)

    alpha = 1.0 / math.sqrt(2.0 + 2.0 * abs(inner_product(u, v)) ** 2)
    # Single complex addition per pair: amp[i, j] == amp[j, i] exactly.
    outer = np.outer(ua, va)
    amp = alpha * (outer + outer.T)

    terms = [
        ((labels[i], labels[j]), amp[i, j])
        for i in range(len(labels))
        for j in range(len(labels))
        if abs(amp[i, j]) >= AMPLITUDE_FLOOR
    ]
    return TwoParticleState(tuple(terms), meta)


def permute(t: TwoParticleState) -> TwoParticleState:
    """Swap the ordered pair in every term; the labelling record is kept."""
    return TwoParticleState(tuple(((k2, k1), amp) for (k1, k2), amp in t), t.meta)


# ---------------------------------------------------------------------
# Frame transports
# ---------------------------------------------------------------------

def _hint_tuple(hint: Sequence[float] | None) -> tuple[float, float, float] | None:
    return None if hint is None else tuple(float(c) for c in require_vector3(hint, "azimuth_hint"))


def _ordered(a: ParticleSpec, b: ParticleSpec) -> tuple[ParticleSpec, ParticleSpec]:
    return (b, a) if compare_descriptions(a, b) > 0 else (a, b)


def _basis_rotor(spec: ParticleSpec, reference: Rotor) -> Rotor:
    """beta: identity, or the standard rotation onto p seen from the reference frame."""
    if spec.basis == "canonical":
        return IDENTITY
    return standard_rotation_to(rotate_vector(inverse(reference), spec.direction))


@dataclass(frozen=True)
class _Transport:
    to_common: Rotor
    k: np.ndarray

    def turn(self, angle: float) -> Rotor:
        return from_axis_angle(self.k, angle)


def _transport(
    anchor: ParticleSpec,
    other: ParticleSpec,
    F: Rotor,
    hint: Sequence[float] | None,
) -> _Transport:
    g = pair_geometry(anchor.direction, other.direction)
    frame_a, _ = bisecting_frames(g.v_a, g.v_b, hint)
    return _Transport(to_common=compose(F, inverse(frame_rotor(frame_a))), k=np.array(g.k))


def _spec_ket(spec: ParticleSpec, tau: Rotor, tau0: Rotor, F: Rotor) -> StateVector:
    spin_frame = compose_all(tau, inverse(tau0), F, _basis_rotor(spec, F))
    return make_ket(spec.Q, spec.p, spec.s, spec.spin_quantum, spin_frame)


def _common_frame_kets(meta: LabelMeta) -> list[tuple[StateVector, StateVector]]:
    """
    (ket of "1", ket of "2") for each admissible anchor choice.

    Identical descriptions leave the anchor undetermined for the labelled
    construction, so both choices are returned and averaged by the caller.
    """
    spec1, spec2, F, sign = meta.first, meta.second, meta.frame, meta.sign
    if sign not in (1, -1):
        raise DomainError(f"[sign] must be +1 or -1, got {sign!r}")
    rel = compare_descriptions(spec1, spec2)
    if rel == 0 and meta.kind == LABELED:
        choices = [True, False]
    else:
        choices = [rel <= 0]

    out = []
    for first_is_anchor in choices:
        anchor, other = (spec1, spec2) if first_is_anchor else (spec2, spec1)
        tr = _transport(anchor, other, F, meta.azimuth_hint)
        tau0_anchor = tr.to_common
        tau0_other = compose(tr.to_common, tr.turn(math.pi))
        r_co = tr.turn(sign * math.pi)

        if meta.kind == SYMMETRIC or first_is_anchor:
            tau_anchor, tau_other = tau0_anchor, compose(tau0_anchor, r_co)
        else:
            tau_anchor, tau_other = compose(tau0_other, r_co), tau0_other

        ket_anchor = _spec_ket(anchor, tau_anchor, tau0_anchor, F)
        ket_other = _spec_ket(other, tau_other, tau0_other, F)
        out.append((ket_anchor, ket_other) if first_is_anchor else (ket_other, ket_anchor))
    return out


def _build_common_frame(meta: LabelMeta) -> TwoParticleState:
    pairs = _common_frame_kets(meta)
    if len(pairs) == 1:
        return symmetrize(*pairs[0], meta=meta)
    w = 1.0 / len(pairs)
    return combine(((w, symmetrize(k1, k2)) for k1, k2 in pairs), meta)


# ---------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------

def bisecting_pair_state(
    a: ParticleSpec,
    b: ParticleSpec,
    azimuth_hint: Sequence[float] | None = None,
) -> TwoParticleState:
    """Each particle described in its own bisecting frame, then symmetrised."""
    first, second = _ordered(a, b)
    frames = bisecting_frames(first.direction, second.direction, azimuth_hint)
    kets = []
    for spec, frame in zip((first, second), frames):
        g = frame_rotor(frame)
        kets.append(make_ket(spec.Q, spec.p, spec.s, spec.spin_quantum, compose(g, _basis_rotor(spec, g))))
    return symmetrize(kets[0], kets[1])


def labeled_common_frame_state(
    spec1: ParticleSpec,
    spec2: ParticleSpec,
    F: Rotor,
    sign: int = 1,
    azimuth_hint: Sequence[float] | None = None,
) -> TwoParticleState:
    """Particle "1" carried to F directly, particle "2" through R_co = K(sign * pi)."""
    meta = LabelMeta(spec1, spec2, sign, F, _hint_tuple(azimuth_hint), LABELED)
    return _build_common_frame(meta)


def symmetric_common_frame_state(
    a: ParticleSpec,
    b: ParticleSpec,
    F: Rotor,
    sign: int = 1,
    azimuth_hint: Sequence[float] | None = None,
) -> TwoParticleState:
    """Both particles referred to F through the anchor-fixed rotor K(sign * pi); label independent."""
    meta = LabelMeta(a, b, sign, F, _hint_tuple(azimuth_hint), SYMMETRIC)
    return _build_common_frame(meta)


def particle_kets(t: TwoParticleState) -> tuple[StateVector, StateVector]:
    """The single-particle kets (of "1", of "2") behind a common-frame state."""
    if t.meta is None:
        raise DomainError("[particle_kets] state carries no labelling record")
    return _common_frame_kets(t.meta)[0]


# ---------------------------------------------------------------------
# Exchange
# ---------------------------------------------------------------------

def exchange(t: TwoParticleState) -> TwoParticleState:
    """Rebuild with the "1"/"2" roles swapped; plain permutation for unlabelled states."""
    if t.meta is None:
        return permute(t)
    return _build_common_frame(t.meta.swapped())


def exchange_phase(t: TwoParticleState, tol: float = EXCHANGE_TOL) -> complex:
    """
    Phase c with exchange(t) = c t.

    For labelled states c is also predicted as the product of the
    single-particle phase factors f = phase_ratio(new ket, old ket) of each
    particle; a disagreement beyond tol raises PhaseConsistencyError.
    """
    swapped = exchange(t)
    phase = state_phase_ratio(swapped, t)
    if t.meta is None:
        return phase

    old1, old2 = particle_kets(t)
    new1, new2 = particle_kets(swapped)
    # After the swap, "2" is the old "1" and vice versa.
    predicted = phase_ratio(new2, old1) * phase_ratio(new1, old2)
    if abs(phase - predicted) > tol:
        raise PhaseConsistencyError(
            f"[exchange_phase] state ratio {phase:.12g} != single-particle product {predicted:.12g}"
        )
    logger.debug("exchange_phase: %s (kind=%s, sign=%+d)", phase, t.meta.kind, t.meta.sign)
    return phase


# ---------------------------------------------------------------------
# Order-free counting
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class OrderFreeCount:
    num_entities: int
    states_per_entity: int
    count: int
    ordered_count: int
    multisets: tuple[tuple[int, ...], ...]


def enumerate_order_free(num_entities: int, states_per_entity: int) -> OrderFreeCount:
    """
    All unordered collections of `num_entities` entities over the state alphabet.

    Each collection is an occupation tuple (how many entities sit in state
    0, 1, ...). Two coins over {heads, tails} give (2,0), (1,1), (0,2).
    """
    if num_entities < 1 or states_per_entity < 1:
        raise DomainError("[enumerate_order_free] both counts must be >= 1")
    multisets = []
    for combo in itertools.combinations_with_replacement(range(states_per_entity), num_entities):
        occ = [0] * states_per_entity
        for state in combo:
            occ[state] += 1
        multisets.append(tuple(occ))
    count = int(comb(num_entities + states_per_entity - 1, num_entities, exact=True))
    assert count == len(multisets)
    return OrderFreeCount(
        num_entities=num_entities,
        states_per_entity=states_per_entity,
        count=count,
        ordered_count=states_per_entity**num_entities,
        multisets=tuple(multisets),
    )

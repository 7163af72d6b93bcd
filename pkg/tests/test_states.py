from __future__ import annotations

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import DomainError, NotARayError
from src.quantum.states import (
    KetLabel,
    StateVector,
    add,
    apply_rotation,
    boost,
    canonical_from_helicity,
    canonical_ket,
    helicity_ket,
    inner_product,
    make_ket,
    norm,
    phase_ratio,
    scale,
    standard_rotation_to,
    terms_equal,
)
from src.spin.rotor import (
    IDENTITY,
    TWO_PI,
    HalfSpin,
    compose,
    from_axis_angle,
    random_rotor,
    random_unit_vector,
    rotate_vector,
    rotor_isclose,
)

from .conftest import SPIN_IDS, SPINS

Q = {"species": "e"}
P = (0.3, -0.2, 0.9)
HALF = HalfSpin(1)
Y = [0.0, 1.0, 0.0]
Z = [0.0, 0.0, 1.0]


def _random_superposition(rng: np.random.Generator, s: HalfSpin) -> StateVector:
    parts = [
        scale(make_ket(Q, rng.normal(size=3), s, m, random_rotor(rng)), complex(*rng.normal(size=2)))
        for m in s.components()
    ]
    out = parts[0]
    for part in parts[1:]:
        out = add(out, part)
    return scale(out, 1.0 / norm(out))


def test_null_rotation_ket_has_one_term():
    v = canonical_ket(Q, P, HALF, HALF)
    assert len(v) == 1
    assert v.amplitude(KetLabel((("species", "e"),), P, HALF, HALF)) == 1.0


def test_rotated_frame_expands_into_canonical_kets():
    v = make_ket(Q, P, HALF, HALF, from_axis_angle(Y, math.pi / 2))
    up = KetLabel((("species", "e"),), P, HALF, HALF)
    down = KetLabel((("species", "e"),), P, HALF, -HALF)
    assert v.amplitude(up) == pytest.approx(math.cos(math.pi / 4))
    assert v.amplitude(down) == pytest.approx(math.sin(math.pi / 4))


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_two_pi_frame_gives_exchange_sign(s):
    for m in s.components():
        v = make_ket(Q, P, s, m, TWO_PI)
        assert len(v) == 1
        assert v.amplitudes()[0] == s.exchange_sign


def test_four_pi_frames_give_the_same_term_map(rng):
    four_pi = from_axis_angle(random_unit_vector(rng), 4 * math.pi)
    r = random_rotor(rng)
    s = HalfSpin(3)
    for m in s.components():
        assert terms_equal(make_ket(Q, P, s, m, r).terms, make_ket(Q, P, s, m, compose(r, four_pi)).terms, atol=1e-12)


def test_frame_turn_about_z_is_a_phase(rng):
    s = HalfSpin(3)
    r = random_rotor(rng)
    alpha = 0.83
    for m in s.components():
        turned = make_ket(Q, P, s, m, compose(r, from_axis_angle(Z, alpha)))
        expected = complex(math.cos(m.value * alpha), -math.sin(m.value * alpha))
        assert phase_ratio(turned, make_ket(Q, P, s, m, r)) == pytest.approx(expected, abs=1e-12)


def test_invalid_component_is_rejected():
    with pytest.raises(DomainError):
        canonical_ket(Q, P, HalfSpin(2), HalfSpin(1))


def test_momenta_merge_within_tolerance():
    a = canonical_ket(Q, P, HALF, HALF)
    b = canonical_ket(Q, (P[0] + 1e-12, P[1], P[2]), HALF, HALF)
    assert len(add(a, b)) == 1
    assert inner_product(a, b) == 1.0


def test_equality_ignores_listing_order():
    up = canonical_ket(Q, P, HALF, HALF)
    down = canonical_ket(Q, P, HALF, -HALF)
    assert add(up, down) == add(down, up)


# ---------------------------------------------------------------------
# Rotation action
# ---------------------------------------------------------------------

@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_identity_rotation_is_trivial(s, rng):
    v = _random_superposition(rng, s)
    assert terms_equal(apply_rotation(IDENTITY, v).terms, v.terms, atol=1e-14)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_two_pi_rotation_gives_exchange_sign(s, rng):
    v = _random_superposition(rng, s)
    assert terms_equal(apply_rotation(TWO_PI, v).terms, scale(v, s.exchange_sign).terms, atol=1e-12)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_rotation_action_is_a_representation(s, rng):
    for _ in range(20):
        v = _random_superposition(rng, s)
        a, b = random_rotor(rng), random_rotor(rng)
        lhs = apply_rotation(a, apply_rotation(b, v))
        rhs = apply_rotation(compose(a, b), v)
        assert terms_equal(lhs.terms, rhs.terms, atol=1e-10)
        assert norm(lhs) == pytest.approx(1.0, abs=1e-12)


def test_rotation_about_z_is_a_phase_on_canonical_kets():
    s = HalfSpin(2)
    alpha = 1.1
    for m in s.components():
        v = canonical_ket(Q, Z, s, m)
        out = apply_rotation(from_axis_angle(Z, alpha), v)
        expected = complex(math.cos(m.value * alpha), -math.sin(m.value * alpha))
        assert phase_ratio(out, v) == pytest.approx(expected, abs=1e-12)


# ---------------------------------------------------------------------
# Helicity
# ---------------------------------------------------------------------

def test_standard_rotation_conventions(rng):
    assert rotor_isclose(standard_rotation_to(Z), IDENTITY)
    assert rotor_isclose(standard_rotation_to([0.0, 0.0, -2.0]), from_axis_angle(Y, math.pi))
    for _ in range(50):
        p = random_unit_vector(rng)
        assert_allclose(rotate_vector(standard_rotation_to(p), Z), p, atol=1e-12)
    with pytest.raises(DomainError):
        standard_rotation_to([0.0, 0.0, 0.0])


def test_helicity_along_z_is_canonical():
    s = HalfSpin(3)
    for lam in s.components():
        assert helicity_ket(Q, (0.0, 0.0, 2.0), s, lam) == canonical_ket(Q, (0.0, 0.0, 2.0), s, lam)


def test_helicity_needs_momentum():
    with pytest.raises(DomainError):
        helicity_ket(Q, (0.0, 0.0, 0.0), HALF, HALF)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_helicity_is_rotation_invariant(s, rng):
    for _ in range(5):
        p = rng.normal(size=3)
        r = random_rotor(rng)
        p_new = rotate_vector(r, p)
        for lam in s.components():
            moved = apply_rotation(r, helicity_ket(Q, p, s, lam))
            for lam2 in s.components():
                overlap = abs(inner_product(helicity_ket(Q, p_new, s, lam2), moved))
                assert overlap == pytest.approx(1.0 if lam2 == lam else 0.0, abs=1e-10)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_canonical_from_helicity_round_trip(s, rng):
    p = rng.normal(size=3)
    for m in s.components():
        assert terms_equal(
            canonical_from_helicity(Q, p, s, m).terms,
            canonical_ket(Q, p, s, m).terms,
            atol=1e-12,
        )


def test_boost_relabels_momentum_only():
    v = add(canonical_ket(Q, P, HALF, HALF), scale(canonical_ket(Q, P, HALF, -HALF), 1j))
    moved = boost((1.0, 0.0, 0.0), v)
    assert [label.p for label in moved.labels()] == [(1.0, 0.0, 0.0)] * 2
    assert_allclose(moved.amplitudes(), v.amplitudes())


def test_boost_rejects_mixed_momenta():
    v = add(canonical_ket(Q, P, HALF, HALF), canonical_ket(Q, Z, HALF, HALF))
    with pytest.raises(DomainError):
        boost((1.0, 0.0, 0.0), v)


# ---------------------------------------------------------------------
# Phase ratios
# ---------------------------------------------------------------------

def test_phase_ratio_reads_off_the_factor(rng):
    v = _random_superposition(rng, HalfSpin(3))
    c = complex(math.cos(0.4), math.sin(0.4))
    assert phase_ratio(scale(v, c), v) == pytest.approx(c, abs=1e-12)
    assert phase_ratio(apply_rotation(TWO_PI, v), v) == pytest.approx(-1.0, abs=1e-12)


def test_phase_ratio_rejects_non_rays():
    up = canonical_ket(Q, P, HALF, HALF)
    down = canonical_ket(Q, P, HALF, -HALF)
    with pytest.raises(NotARayError):
        phase_ratio(up, down)
    with pytest.raises(NotARayError):
        phase_ratio(scale(up, 2.0), up)
    with pytest.raises(NotARayError):
        phase_ratio(StateVector(), up)

from __future__ import annotations

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from src.errors import DomainError
from src.spin.rotor import IDENTITY, TWO_PI, HalfSpin, compose, from_axis_angle, random_rotor
from src.spin.wigner import MAX_TWICE_SPIN, dmatrix, little_d, little_d_matrix, su2_matrix
from src.validation.checks import unitarity_deviation

from .conftest import SPIN_IDS, SPINS

Y = [0.0, 1.0, 0.0]
Z = [0.0, 0.0, 1.0]


def _jz(s: HalfSpin) -> np.ndarray:
    return np.diag([m.value for m in s.components()])


def _jy(s: HalfSpin) -> np.ndarray:
    """Standard J_y from the ladder operators in the m = s..-s basis."""
    j = s.value
    comps = s.components()
    jp = np.zeros((s.multiplicity, s.multiplicity), dtype=complex)
    for col, m in enumerate(comps[1:], start=1):
        jp[col - 1, col] = math.sqrt(j * (j + 1) - m.value * (m.value + 1))
    return (jp - jp.conj().T) / 2j


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_identity_maps_to_identity(s):
    assert_allclose(dmatrix(s, IDENTITY), np.eye(s.multiplicity), atol=1e-15)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_two_pi_gives_exchange_sign(s):
    assert_allclose(dmatrix(s, TWO_PI), s.exchange_sign * np.eye(s.multiplicity), atol=1e-12)


def test_spin_one_pi_turn_about_z():
    d = dmatrix(HalfSpin(2), from_axis_angle(Z, math.pi))
    assert_allclose(d, np.diag([-1.0, 1.0, -1.0]), atol=1e-12)


def test_spin_half_is_the_fundamental_matrix(rng):
    r = random_rotor(rng)
    assert_allclose(dmatrix(HalfSpin(1), r), su2_matrix(r), atol=1e-15)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_representation_property(s, rng):
    for _ in range(500):
        a, b = random_rotor(rng), random_rotor(rng)
        assert_allclose(dmatrix(s, compose(a, b)), dmatrix(s, a) @ dmatrix(s, b), atol=1e-10)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_negated_rotor_flips_by_exchange_sign(s, rng):
    for _ in range(20):
        r = random_rotor(rng)
        assert_allclose(dmatrix(s, -r), s.exchange_sign * dmatrix(s, r), atol=1e-12)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_unitary_with_unit_determinant(s, rng):
    for _ in range(50):
        d = dmatrix(s, random_rotor(rng))
        assert unitarity_deviation(d) < 1e-10
        assert abs(np.linalg.det(d)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_matches_generator_exponentials(s, rng):
    for _ in range(10):
        alpha = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        assert_allclose(dmatrix(s, from_axis_angle(Z, alpha)), expm(-1j * alpha * _jz(s)), atol=1e-10)
        assert_allclose(dmatrix(s, from_axis_angle(Y, alpha)), expm(-1j * alpha * _jy(s)), atol=1e-10)


@pytest.mark.parametrize("s", SPINS, ids=SPIN_IDS)
def test_agrees_with_little_d(s, rng):
    for _ in range(20):
        beta = float(rng.uniform(0.0, math.pi))
        assert_allclose(dmatrix(s, from_axis_angle(Y, beta)), little_d_matrix(s, beta), atol=1e-10)


def test_little_d_known_values():
    beta = 0.7
    half = HalfSpin(1)
    assert little_d(half, half, half, beta) == pytest.approx(math.cos(beta / 2))
    assert little_d(half, half, -half, beta) == pytest.approx(-math.sin(beta / 2))
    one = HalfSpin(2)
    assert little_d(one, HalfSpin(0), HalfSpin(0), beta) == pytest.approx(math.cos(beta))
    assert little_d(one, one, HalfSpin(0), beta) == pytest.approx(-math.sin(beta) / math.sqrt(2))


def test_spin_cap_and_negative_spin():
    with pytest.raises(DomainError):
        dmatrix(HalfSpin(MAX_TWICE_SPIN + 1), IDENTITY)
    with pytest.raises(DomainError):
        dmatrix(HalfSpin(-1), IDENTITY)
    assert dmatrix(HalfSpin(MAX_TWICE_SPIN), IDENTITY).shape == (11, 11)


def test_little_d_rejects_bad_component():
    with pytest.raises(DomainError):
        little_d(HalfSpin(2), HalfSpin(1), HalfSpin(0), 0.1)

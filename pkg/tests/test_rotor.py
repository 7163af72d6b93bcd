from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.spatial.transform import Rotation

from src.errors import DomainError
from src.geometry.frames import Frame
from src.spin.rotor import (
    IDENTITY,
    TWO_PI,
    HalfSpin,
    Rotor,
    as_matrix,
    compose,
    compose_all,
    frame_rotor,
    from_axis_angle,
    inverse,
    random_rotor,
    random_unit_vector,
    rotate_vector,
    rotor_isclose,
)

Z = [0.0, 0.0, 1.0]
X = [1.0, 0.0, 0.0]


# ---------------------------------------------------------------------
# HalfSpin
# ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "text, twice",
    [("3/2", 3), ("-1/2", -1), ("1", 2), ("0", 0), (0.5, 1), (Fraction(5, 2), 5), (" 2 ", 4)],
)
def test_halfspin_parse(text, twice):
    assert HalfSpin.parse(text).twice == twice


@pytest.mark.parametrize("text", ["1/3", "abc", "0.25", ""])
def test_halfspin_parse_rejects_non_half_integers(text):
    with pytest.raises(DomainError):
        HalfSpin.parse(text)


def test_halfspin_str_and_value():
    assert str(HalfSpin(3)) == "3/2"
    assert str(HalfSpin(4)) == "2"
    assert str(HalfSpin(-1)) == "-1/2"
    assert HalfSpin(3).value == 1.5


def test_halfspin_rejects_float_and_bool():
    with pytest.raises(DomainError):
        HalfSpin(1.0)  # type: ignore[arg-type]
    with pytest.raises(DomainError):
        HalfSpin(True)


def test_components_descend_from_s():
    assert [m.twice for m in HalfSpin(3).components()] == [3, 1, -1, -3]
    assert [m.twice for m in HalfSpin(0).components()] == [0]


def test_component_membership_and_index():
    s = HalfSpin(2)
    assert HalfSpin(0).is_component_of(s)
    assert not HalfSpin(1).is_component_of(s)
    assert not HalfSpin(4).is_component_of(s)
    assert HalfSpin(-2).index_in(s) == 2
    with pytest.raises(DomainError):
        HalfSpin(1).index_in(s)


def test_exchange_sign_and_multiplicity():
    assert [HalfSpin(t).exchange_sign for t in range(4)] == [1, -1, 1, -1]
    assert [HalfSpin(t).is_integral for t in range(4)] == [True, False, True, False]
    assert HalfSpin(5).multiplicity == 6
    with pytest.raises(DomainError):
        HalfSpin(-1).require_magnitude()


# ---------------------------------------------------------------------
# Rotors
# ---------------------------------------------------------------------

def test_rotor_rejects_non_unit_quaternion():
    with pytest.raises(DomainError):
        Rotor(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        Rotor(float("nan"), 0.0, 0.0, 0.0)


def test_from_array_renormalises():
    r = Rotor.from_array([2.0, 0.0, 0.0, 0.0])
    assert rotor_isclose(r, IDENTITY)
    with pytest.raises(DomainError):
        Rotor.from_array([0.0, 0.0, 0.0, 0.0])


def test_zero_angle_is_identity():
    assert_allclose(from_axis_angle(Z, 0.0).as_array(), [1, 0, 0, 0], atol=1e-15)


def test_two_pi_is_not_identity():
    r = from_axis_angle(Z, 2 * math.pi)
    assert_allclose(r.as_array(), [-1, 0, 0, 0], atol=1e-12)
    assert not rotor_isclose(r, IDENTITY)


def test_two_pi_turns_compose_to_minus_one():
    half = from_axis_angle(Z, math.pi)
    assert rotor_isclose(compose(half, half), TWO_PI)
    assert rotor_isclose(compose_all(half, half, half, half), IDENTITY)


def test_non_unit_axis_is_rejected():
    with pytest.raises(DomainError):
        from_axis_angle([1.0, 1.0, 0.0], 0.3)
    with pytest.raises(DomainError):
        from_axis_angle(Z, float("inf"))


def test_inverse_of_pi_turn_is_minus_pi_turn():
    assert rotor_isclose(inverse(from_axis_angle(X, math.pi)), from_axis_angle(X, -math.pi))


def test_compose_with_inverse_is_identity(rng):
    for _ in range(50):
        r = random_rotor(rng)
        assert rotor_isclose(compose(r, inverse(r)), IDENTITY)
        assert rotor_isclose(compose(IDENTITY, r), r)


def test_rotate_vector_quarter_turn():
    r = from_axis_angle(Z, math.pi / 2)
    assert_allclose(rotate_vector(r, X), [0.0, 1.0, 0.0], atol=1e-15)


def test_double_cover_random(rng):
    for _ in range(200):
        n = random_unit_vector(rng)
        theta = float(rng.uniform(-10.0, 10.0))
        a = from_axis_angle(n, theta + 2 * math.pi).as_array()
        b = from_axis_angle(n, theta).as_array()
        assert_allclose(a, -b, atol=1e-12)


def test_negated_rotor_acts_identically_on_vectors(rng):
    r = random_rotor(rng)
    v = rng.normal(size=3)
    assert_allclose(rotate_vector(-r, v), rotate_vector(r, v), atol=1e-12)
    assert not rotor_isclose(-r, r)


def test_composition_is_a_homomorphism(rng):
    for _ in range(1000):
        a, b = random_rotor(rng), random_rotor(rng)
        v = rng.normal(size=3)
        assert_allclose(
            rotate_vector(compose(a, b), v),
            rotate_vector(a, rotate_vector(b, v)),
            atol=1e-10,
        )


def test_rotation_preserves_length(rng):
    for _ in range(100):
        v = rng.normal(size=3)
        assert np.linalg.norm(rotate_vector(random_rotor(rng), v)) == pytest.approx(np.linalg.norm(v), abs=1e-12)


def test_as_matrix_matches_scipy(rng):
    for _ in range(50):
        r = random_rotor(rng)
        expected = Rotation.from_quat([r.x, r.y, r.z, r.w]).as_matrix()
        assert_allclose(as_matrix(r), expected, atol=1e-12)


# ---------------------------------------------------------------------
# Frame lifts
# ---------------------------------------------------------------------

def test_frame_rotor_of_lab_frame_is_identity():
    lab = Frame(x=np.array(X), y=np.array([0.0, 1.0, 0.0]), z=np.array(Z))
    assert rotor_isclose(frame_rotor(lab), IDENTITY)


def test_frame_rotor_reproduces_the_frame(rng):
    for _ in range(50):
        r = random_rotor(rng)
        frame = Frame.from_zy(rotate_vector(r, Z), rotate_vector(r, [0.0, 1.0, 0.0]))
        g = frame_rotor(frame)
        assert g.w >= 0.0
        assert_allclose(as_matrix(g), frame.matrix(), atol=1e-12)
        # Same frame, same lift.
        assert rotor_isclose(frame_rotor(frame), g, atol=0.0)

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lyapdrive.core import (
    ControllerParams,
    InvalidGeometryError,
    InvalidInputError,
    NavState,
    NoiseBounds,
    Pose,
    RobotGeometry,
    VelocityCommand,
    check_switch_radius,
    command_to_wheel_speeds,
    min_switch_radius,
    wheel_speeds_to_command,
    wrap_angle,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@pytest.mark.parametrize("a, expected", [
    (0.0, 0.0),
    (3 * math.pi, math.pi),
    (-3.5 * math.pi, 0.5 * math.pi),
    (-math.pi, math.pi),
    (math.pi, math.pi),
])
def test_wrap_angle_examples(a, expected):
    assert wrap_angle(a) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_wrap_angle_rejects_non_finite(bad):
    with pytest.raises(InvalidInputError):
        wrap_angle(bad)


@given(finite)
def test_wrap_angle_range_and_congruence(a):
    r = wrap_angle(a)
    assert -math.pi < r <= math.pi
    k = (a - r) / (2 * math.pi)
    assert k == pytest.approx(round(k), abs=1e-9 * max(1.0, abs(a)))


@given(finite)
def test_wrap_angle_idempotent(a):
    r = wrap_angle(a)
    assert wrap_angle(r) == r


def test_pose_normalizes_heading():
    assert Pose(0, 0, 3 * math.pi / 2).theta == pytest.approx(-math.pi / 2)
    with pytest.raises(InvalidInputError):
        Pose(math.nan, 0.0)


def test_navstate_invariants():
    nav = NavState(1.0, 0.1, 0.4)
    assert nav.theta == pytest.approx(0.3)
    with pytest.raises(InvalidInputError):
        NavState(-1e-9, 0.0, 0.0)


GEOM = RobotGeometry(0.05, 0.6)


@pytest.mark.parametrize("v, w, expected", [
    (0.0, 0.0, (0.0, 0.0)),
    (1.0, 0.0, (20.0, 20.0)),
    (0.0, 1.0, (-6.0, 6.0)),
])
def test_wheel_speed_examples(v, w, expected):
    assert command_to_wheel_speeds(VelocityCommand(v, w), GEOM) == pytest.approx(expected, abs=1e-12)


def test_zero_wheel_radius_is_rejected():
    with pytest.raises(InvalidGeometryError):
        RobotGeometry(0.0, 0.6)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_wheel_speeds_round_trip(v, w):
    back = wheel_speeds_to_command(*command_to_wheel_speeds(VelocityCommand(v, w), GEOM), GEOM)
    scale = max(abs(v), abs(w), 1e-300)
    assert abs(back.v - v) <= 1e-12 * scale
    assert abs(back.omega - w) <= 1e-12 * scale


def test_reference_defaults():
    p = ControllerParams()
    assert (p.gamma, p.k, p.h, p.k2) == (1.3, 1.0, 0.17, 2.7)
    b = NoiseBounds.reference()
    assert b.as_tuple() == (0.3, 0.3, 0.17, 0.065, 0.2167)


def test_switch_radius_condition():
    b = NoiseBounds.reference()
    need = min_switch_radius(ControllerParams(), b)
    assert need == pytest.approx(math.hypot(0.3, 0.3) + 0.065 / 1.3)
    check_switch_radius(ControllerParams(eps_P=0.5), b)
    with pytest.raises(InvalidInputError):
        check_switch_radius(ControllerParams(eps_P=0.45), b)
    # any positive radius is admissible without noise
    check_switch_radius(ControllerParams(eps_P=1e-6), NoiseBounds())


@pytest.mark.parametrize("field", ["gamma", "k", "h", "k2", "eps_P"])
def test_controller_params_must_be_positive(field):
    with pytest.raises(InvalidInputError):
        ControllerParams(**{field: 0.0})

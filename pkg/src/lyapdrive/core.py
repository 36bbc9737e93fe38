"""Shared value types, angle arithmetic and parameter records."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

PI = math.pi
TWO_PI = 2.0 * math.pi
remainder = math.remainder


class InvalidInputError(ValueError):
    """A numeric input was non-finite or outside its domain."""


class InvalidGeometryError(ValueError):
    pass


class DegenerateStateError(ValueError):
    """The navigation state sits on a singularity of the model (rho <= 0)."""


def wrap_angle(a: float) -> float:
    """Map ``a`` onto the principal branch (-pi, pi]."""
    try:
        r = remainder(a, TWO_PI)
    except ValueError:
        r = math.nan
    if r != r:
        raise InvalidInputError(f"cannot wrap non-finite angle {a!r}")
    # remainder() is exact and lands in [-pi, pi]; fold the closed lower end
    return PI if r == -PI else r


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        _finite("x", self.x)
        _finite("y", self.y)
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class NavState:
    """Polar navigation variables: distance, bearing error and goal-frame bearing."""

    rho: float
    alpha: float
    beta: float

    def __post_init__(self):
        _finite("rho", self.rho)
        if self.rho < 0:
            raise InvalidInputError(f"rho must be >= 0, got {self.rho}")
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))
        object.__setattr__(self, "beta", wrap_angle(self.beta))

    @property
    def theta(self) -> float:
        return wrap_angle(self.beta - self.alpha)


@dataclass(frozen=True)
class VelocityCommand:
    v: float
    omega: float


@dataclass(frozen=True)
class RobotGeometry:
    # the 0.05 m figure is used as the radius, see README
    wheel_radius: float = 0.05
    wheel_separation: float = 0.6

    def __post_init__(self):
        if not (self.wheel_radius > 0 and self.wheel_separation > 0):
            raise InvalidGeometryError(
                f"wheel radius and separation must be positive, got "
                f"R={self.wheel_radius}, L={self.wheel_separation}"
            )


@dataclass(frozen=True)
class NoiseBounds:
    """Half-widths of the bounded disturbances; all zero means noise-free."""

    eps_X_max: float = 0.0
    eps_Y_max: float = 0.0
    eps_theta_max: float = 0.0
    eps_v_max: float = 0.0
    eps_omega_max: float = 0.0

    def __post_init__(self):
        for name, value in self.as_dict().items():
            _finite(name, value)
            if value < 0:
                raise InvalidInputError(f"{name} must be >= 0, got {value}")

    @classmethod
    def reference(cls) -> "NoiseBounds":
        """Measurement and actuation bounds of the reference robot."""
        return cls(0.3, 0.3, 0.17, 0.065, 0.2167)

    def as_dict(self) -> dict[str, float]:
        return {
            "eps_X_max": self.eps_X_max,
            "eps_Y_max": self.eps_Y_max,
            "eps_theta_max": self.eps_theta_max,
            "eps_v_max": self.eps_v_max,
            "eps_omega_max": self.eps_omega_max,
        }

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.eps_X_max, self.eps_Y_max, self.eps_theta_max,
                self.eps_v_max, self.eps_omega_max)

    @property
    def is_zero(self) -> bool:
        return not any(self.as_tuple())


@dataclass(frozen=True)
class ControllerParams:
    """Gains of the two-regime law.

    gamma doubles as the speed cap v_max; eps_P is the radius at which the
    controller latches into the local regime. ``omega_max`` optionally
    saturates the angular rate (off by default).
    """

    gamma: float = 1.3
    k: float = 1.0
    h: float = 0.17
    k2: float = 2.7
    eps_P: float = 0.5
    omega_max: float | None = None

    def __post_init__(self):
        for name in ("gamma", "k", "h", "k2", "eps_P"):
            value = getattr(self, name)
            _finite(name, value)
            if value <= 0:
                raise InvalidInputError(f"{name} must be > 0, got {value}")
        if self.omega_max is not None and not self.omega_max > 0:
            raise InvalidInputError(f"omega_max must be > 0, got {self.omega_max}")


def min_switch_radius(params: ControllerParams, bounds: NoiseBounds) -> float:
    """Worst-case |eps_rho| + |eps_v|/gamma for the given bounds.

    |eps_rho| cannot exceed the planar measurement error by the triangle
    inequality, so this bounds the right-hand side of the switch condition.
    """
    return math.hypot(bounds.eps_X_max, bounds.eps_Y_max) + bounds.eps_v_max / params.gamma


def check_switch_radius(params: ControllerParams, bounds: NoiseBounds) -> None:
    need = min_switch_radius(params, bounds)
    if not params.eps_P > need:
        raise InvalidInputError(
            f"eps_P={params.eps_P} must exceed {need:.6g} for these noise bounds"
        )


class Regime(enum.Enum):
    GLOBAL = "GLOBAL"
    LOCAL = "LOCAL"


def command_to_wheel_speeds(cmd: VelocityCommand, geom: RobotGeometry) -> tuple[float, float]:
    """Left and right wheel rates (rad/s) realizing ``cmd``."""
    R, L = geom.wheel_radius, geom.wheel_separation
    if not (R > 0 and L > 0):
        raise InvalidGeometryError(f"invalid geometry R={R}, L={L}")
    omega_l = (2.0 * cmd.v - L * cmd.omega) / (2.0 * R)
    omega_r = (2.0 * cmd.v + L * cmd.omega) / (2.0 * R)
    return omega_l, omega_r


def wheel_speeds_to_command(omega_l: float, omega_r: float, geom: RobotGeometry) -> VelocityCommand:
    R, L = geom.wheel_radius, geom.wheel_separation
    return VelocityCommand(R * (omega_l + omega_r) / 2.0, R * (omega_r - omega_l) / L)

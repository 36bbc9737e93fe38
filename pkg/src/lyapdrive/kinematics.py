"""Forward-Euler kinematics in Cartesian and navigation-variable form.

The float-level helpers (``nav_variables``, ``euler_step``) are what the
closed loop calls every step; the dataclass-level functions wrap them.
"""

from __future__ import annotations

import enum
import math

from .core import (
    PI,
    TWO_PI,
    DegenerateStateError,
    NavState,
    Pose,
    VelocityCommand,
    wrap_angle,
)

HALF_PI = 0.5 * math.pi


class AlphaBranch(enum.Enum):
    FORWARD = "FORWARD"    # |alpha| < pi/2
    BACKWARD = "BACKWARD"  # |alpha| >= pi/2, reverse gear


def classify_alpha(alpha: float) -> AlphaBranch:
    # |alpha| == pi/2 goes to BACKWARD; cos(alpha) = 0 there so v = 0 either way
    return AlphaBranch.FORWARD if abs(alpha) < HALF_PI else AlphaBranch.BACKWARD


def nav_variables(x: float, y: float, theta: float,
                  xd: float, yd: float, thd: float = 0.0) -> tuple[float, float, float]:
    """(rho, alpha, beta) of pose (x, y, theta) w.r.t. the goal, in the goal frame."""
    dx, dy = xd - x, yd - y
    if thd:
        c, s = math.cos(thd), math.sin(thd)
        dx, dy = c * dx + s * dy, c * dy - s * dx
        theta = theta - thd
    rho = math.hypot(dx, dy)
    bearing = math.atan2(dy, dx) if rho > 0.0 else 0.0
    # wrap_angle inlined (hot path); non-finite input propagates as NaN
    alpha = math.remainder(bearing - theta, TWO_PI)
    if alpha == -PI:
        alpha = PI
    beta = math.remainder(theta + alpha, TWO_PI)
    if beta == -PI:
        beta = PI
    return rho, alpha, beta


def to_nav_state(pose: Pose, goal: Pose) -> NavState:
    return NavState(*nav_variables(pose.x, pose.y, pose.theta, goal.x, goal.y, goal.theta))


def euler_step(x: float, y: float, theta: float,
               v: float, omega: float, Ts: float) -> tuple[float, float, float]:
    th = math.remainder(theta + Ts * omega, TWO_PI)
    if th == -PI:
        th = PI
    return x + Ts * v * math.cos(theta), y + Ts * v * math.sin(theta), th


def cartesian_step(pose: Pose, cmd: VelocityCommand, Ts: float) -> Pose:
    """One sampling period of the unicycle model; ``cmd.v`` is the body-frame speed."""
    if not Ts > 0:
        raise ValueError(f"Ts must be > 0, got {Ts}")
    return Pose(*euler_step(pose.x, pose.y, pose.theta, cmd.v, cmd.omega, Ts))


def branch_sign(branch: AlphaBranch) -> float:
    return 1.0 if branch is AlphaBranch.FORWARD else -1.0


def to_body_frame(cmd: VelocityCommand, branch: AlphaBranch) -> VelocityCommand:
    """Convert a branch-frame command to the speed the wheels must produce.

    In the BACKWARD branch the forward direction is redefined (v -> -v), so a
    positive branch-frame speed means reversing.
    """
    if branch is AlphaBranch.FORWARD:
        return cmd
    return VelocityCommand(-cmd.v, cmd.omega)


def polar_step(nav: NavState, cmd: VelocityCommand, Ts: float, branch: AlphaBranch) -> NavState:
    """Discrete navigation-variable update, ``cmd`` given in the branch frame."""
    if not nav.rho > 0:
        raise DegenerateStateError(f"polar update undefined at rho={nav.rho}")
    s = branch_sign(branch)
    sin_a = math.sin(nav.alpha)
    drift = s * cmd.v * Ts * sin_a / nav.rho
    rho = nav.rho - s * cmd.v * Ts * math.cos(nav.alpha)
    return NavState(
        max(rho, 0.0),
        wrap_angle(nav.alpha + drift - cmd.omega * Ts),
        wrap_angle(nav.beta + drift),
    )


def noisy_polar_step(nav: NavState, cmd: VelocityCommand, sys_noise: tuple[float, float],
                     Ts: float, branch: AlphaBranch) -> NavState:
    """``polar_step`` with actuator disturbances added to both inputs."""
    eps_v, eps_omega = sys_noise
    return polar_step(nav, VelocityCommand(cmd.v + eps_v, cmd.omega + eps_omega), Ts, branch)

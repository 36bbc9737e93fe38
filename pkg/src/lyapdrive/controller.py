"""Two-regime stabilizing law.

Far from the goal (GLOBAL) the tanh-saturated Lyapunov law steers distance,
bearing error and goal-frame bearing together. Once the measured distance
drops to ``eps_P`` the controller latches into LOCAL, where the angular rate
only regulates the heading theta = beta - alpha.

Commands are returned in the branch frame: in the BACKWARD branch ``v`` is the
reversing speed. Use ``kinematics.to_body_frame`` before actuating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ControllerParams, DegenerateStateError, Regime, VelocityCommand, wrap_angle
from .kinematics import AlphaBranch, HALF_PI, classify_alpha
from .noise import MeasuredNavState

SINC_EPS = 1e-8


def sinc(a: float) -> float:
    return 1.0 if abs(a) < SINC_EPS else math.sin(a) / a


def _clamp(omega: float, omega_max: float | None) -> float:
    if omega_max is None:
        return omega
    return max(-omega_max, min(omega_max, omega))


def branch_speed(rho: float, alpha: float, gamma: float, backward: bool) -> float:
    v = gamma * math.tanh(rho) * math.cos(alpha)
    return -v if backward else v


def tanh_ratio(rho: float) -> float:
    """tanh(rho)/rho, continued by its limit 1 at rho = 0."""
    if not rho >= 0:
        raise DegenerateStateError(f"global law undefined at rho_m={rho}")
    return math.tanh(rho) / rho if rho > 0.0 else 1.0


def global_rate(rho: float, alpha: float, beta: float, p: ControllerParams) -> float:
    return p.k * alpha + p.gamma * sinc(alpha) * tanh_ratio(rho) * math.cos(alpha) * (alpha + p.h * beta)


def local_rate(alpha: float, beta: float, p: ControllerParams) -> float:
    return -p.k2 * wrap_angle(beta - alpha)


def global_law(meas: MeasuredNavState, params: ControllerParams,
               branch: AlphaBranch) -> VelocityCommand:
    backward = branch is AlphaBranch.BACKWARD
    v = branch_speed(meas.rho_m, meas.alpha_m, params.gamma, backward)
    omega = global_rate(meas.rho_m, meas.alpha_m, meas.beta_m, params)
    return VelocityCommand(v, _clamp(omega, params.omega_max))


def local_law(meas: MeasuredNavState, params: ControllerParams,
              branch: AlphaBranch) -> VelocityCommand:
    if not meas.rho_m >= 0:
        raise DegenerateStateError(f"local law undefined at rho_m={meas.rho_m}")
    backward = branch is AlphaBranch.BACKWARD
    v = branch_speed(meas.rho_m, meas.alpha_m, params.gamma, backward)
    omega = local_rate(meas.alpha_m, meas.beta_m, params)
    return VelocityCommand(v, _clamp(omega, params.omega_max))


@dataclass(frozen=True)
class ControllerState:
    params: ControllerParams
    regime: Regime = Regime.GLOBAL


def select_regime(state: ControllerState, meas: MeasuredNavState) -> Regime:
    if state.regime is Regime.LOCAL:
        return Regime.LOCAL
    return Regime.LOCAL if meas.rho_m <= state.params.eps_P else Regime.GLOBAL


def compute_command(state: ControllerState,
                    meas: MeasuredNavState) -> tuple[VelocityCommand, Regime]:
    regime = select_regime(state, meas)
    branch = classify_alpha(meas.alpha_m)
    law = local_law if regime is Regime.LOCAL else global_law
    return law(meas, state.params, branch), regime


def command_fast(rho: float, alpha: float, beta: float, local: bool,
                 p: ControllerParams) -> tuple[float, float, bool]:
    """Float-level ``compute_command`` for the simulation loop.

    Returns (branch-frame v, omega, backward).
    """
    backward = abs(alpha) >= HALF_PI
    v = branch_speed(rho, alpha, p.gamma, backward)
    if local:
        omega = local_rate(alpha, beta, p)
    else:
        omega = global_rate(rho, alpha, beta, p)
    return v, _clamp(omega, p.omega_max), backward

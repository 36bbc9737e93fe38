"""Lyapunov functions of the two regimes and their one-step differences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from math import remainder

from .core import PI, TWO_PI, NavState, Regime, wrap_angle


class LyapunovRecord(NamedTuple):
    step_index: int
    V: float
    delta_V: float
    regime: Regime


class DeltaV(NamedTuple):
    exact: float        # V(after) - V(before)
    first_order: float  # gradient-times-increment form (drops the quadratic terms)


def v_global_xyz(rho: float, alpha: float, beta: float, h: float) -> float:
    return 0.5 * rho * rho + 0.5 * alpha * alpha + 0.5 * h * beta * beta


def v_local_xyz(rho: float, alpha: float, beta: float) -> float:
    th = remainder(beta - alpha, TWO_PI)
    if th == -PI:
        th = PI
    return 0.5 * rho * rho + 0.5 * th * th


def V_global(nav: NavState, h: float) -> float:
    if not h > 0:
        raise ValueError(f"h must be > 0, got {h}")
    return v_global_xyz(nav.rho, nav.alpha, nav.beta, h)


def V_local(nav: NavState) -> float:
    return v_local_xyz(nav.rho, nav.alpha, nav.beta)


def delta_V(before: NavState, after: NavState, which: Regime, h: float) -> DeltaV:
    d_rho = after.rho - before.rho
    if which is Regime.GLOBAL:
        exact = V_global(after, h) - V_global(before, h)
        first = (before.rho * d_rho
                 + before.alpha * wrap_angle(after.alpha - before.alpha)
                 + h * before.beta * wrap_angle(after.beta - before.beta))
    else:
        exact = V_local(after) - V_local(before)
        th0 = before.theta
        first = before.rho * d_rho + th0 * wrap_angle(after.theta - th0)
    return DeltaV(exact, first)


@dataclass
class TraceReport:
    """Summary of a logged V / dV trace, split by regime."""

    steps: dict[str, int]
    increases: dict[str, int]
    max_dV: dict[str, float]
    V_start: float
    V_end: float

    @property
    def monotone(self) -> bool:
        return not any(self.increases.values())


def summarize_trace(regimes, V, dV) -> TraceReport:
    steps, inc, worst = {}, {}, {}
    for reg, v, d in zip(regimes, V, dV):
        key = reg.value if isinstance(reg, Regime) else str(reg)
        steps[key] = steps.get(key, 0) + 1
        inc[key] = inc.get(key, 0) + (d > 0)
        worst[key] = max(worst.get(key, float("-inf")), d)
    V = list(V)
    return TraceReport(steps, inc, worst,
                       V[0] if V else float("nan"), V[-1] if V else float("nan"))

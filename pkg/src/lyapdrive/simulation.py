"""Closed-loop episodes, Monte-Carlo campaigns and the ring experiment.

Each step: draw noise, measure the corrupted pose, compute the command from
the measurement only, then propagate the true pose with the disturbed inputs.
The true Cartesian pose is the state of record; termination and the logged
Lyapunov values are evaluated on it.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .controller import command_fast
from .core import (
    ControllerParams,
    NoiseBounds,
    Pose,
    Regime,
    check_switch_radius,
    wrap_angle,
)
from .kinematics import euler_step, nav_variables
from .lyapunov import v_global_xyz, v_local_xyz
from .noise import derive_seed, draw_block, make_rng

log = logging.getLogger(__name__)


class LawVariant(enum.Enum):
    TWO_REGIME = "two-regime"
    GLOBAL_ONLY = "global-only"


# one row per control step; v/omega are the commanded body-frame inputs (pre-disturbance)
TRAJECTORY_DTYPE = np.dtype([
    ("step", np.int64), ("t", np.float64),
    ("x", np.float64), ("y", np.float64), ("theta", np.float64),
    ("rho", np.float64), ("alpha", np.float64), ("beta", np.float64),
    ("rho_m", np.float64), ("alpha_m", np.float64), ("beta_m", np.float64),
    ("theta_m", np.float64),
    ("v", np.float64), ("omega", np.float64),
    ("local", np.bool_), ("backward", np.bool_),
    ("V", np.float64), ("dV", np.float64),
])


@dataclass(frozen=True)
class SimConfig:
    start_pose: Pose
    goal_pose: Pose = field(default_factory=lambda: Pose(0.0, 0.0, 0.0))
    Ts: float = 0.1
    max_steps: int = 6000
    rho_tol: float = 1e-5
    theta_tol: float = 1e-3
    controller: ControllerParams = field(default_factory=ControllerParams)
    bounds: NoiseBounds = field(default_factory=NoiseBounds)
    seed: int = 0
    law: LawVariant = LawVariant.TWO_REGIME

    def __post_init__(self):
        if not (math.isfinite(self.Ts) and self.Ts > 0):
            raise ValueError(f"Ts must be > 0, got {self.Ts}")
        if not self.rho_tol > 0:
            raise ValueError(f"rho_tol must be > 0, got {self.rho_tol}")
        if not self.theta_tol > 0:
            raise ValueError(f"theta_tol must be > 0, got {self.theta_tol}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValueError(f"max_steps must be an integer >= 1, got {self.max_steps}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")
        check_switch_radius(self.controller, self.bounds)


class EpisodeAborted(RuntimeError):
    """The closed loop produced a non-finite state; ``result`` holds the partial log."""

    def __init__(self, message: str, result: "EpisodeResult"):
        super().__init__(message)
        self.result = result


@dataclass(eq=False)
class EpisodeResult:
    config: SimConfig
    trajectory: np.ndarray
    final_pose: Pose
    steps_used: int
    aborted: bool = False

    @property
    def final_errors(self) -> tuple[float, float, float]:
        g = self.config.goal_pose
        p = self.final_pose
        return abs(p.x - g.x), abs(p.y - g.y), abs(wrap_angle(p.theta - g.theta))

    @property
    def final_rho(self) -> float:
        g = self.config.goal_pose
        return math.hypot(self.final_pose.x - g.x, self.final_pose.y - g.y)

    @property
    def reached(self) -> bool:
        return self.final_rho <= self.config.rho_tol

    @property
    def converged(self) -> bool:
        """Arrived within rho_tol with the heading settled within theta_tol."""
        return (not self.aborted and self.reached
                and self.final_errors[2] <= self.config.theta_tol)

    def regimes(self) -> list[Regime]:
        return [Regime.LOCAL if loc else Regime.GLOBAL for loc in self.trajectory["local"]]

    def __eq__(self, other):
        if not isinstance(other, EpisodeResult):
            return NotImplemented
        return (self.config == other.config
                and self.final_pose == other.final_pose
                and self.steps_used == other.steps_used
                and self.aborted == other.aborted
                and self.trajectory.dtype == other.trajectory.dtype
                and self.trajectory.tobytes() == other.trajectory.tobytes())


def run_episode(config: SimConfig) -> EpisodeResult:
    p = config.controller
    Ts, rho_tol, n = config.Ts, config.rho_tol, config.max_steps
    gx, gy, gth = config.goal_pose.x, config.goal_pose.y, config.goal_pose.theta
    h = p.h
    eps_P = p.eps_P
    global_only = config.law is LawVariant.GLOBAL_ONLY

    if config.bounds.is_zero:
        noise = None
    else:
        noise = draw_block(config.bounds, make_rng(config.seed), n).tolist()

    x, y, th = config.start_pose.x, config.start_pose.y, config.start_pose.theta
    rho, al, be = nav_variables(x, y, th, gx, gy, gth)
    local = False
    v_local_prev = False  # V_next below was evaluated with the local function
    V_next = None
    rows = []
    aborted = None

    for i in range(n):
        if rho <= rho_tol:
            break
        if noise is None:
            ex = ey = et = ev = ew = 0.0
        else:
            ex, ey, et, ev, ew = noise[i]
        try:
            th_m = wrap_angle(th + et)
            rm, am, bm = nav_variables(x + ex, y + ey, th_m, gx, gy, gth)
            if not local and not global_only and rm <= eps_P:
                local = True
            v, w, backward = command_fast(rm, am, bm, local, p)
            v_act = v + ev
            x1, y1, th1 = euler_step(x, y, th, -v_act if backward else v_act, w + ew, Ts)
            rho1, al1, be1 = nav_variables(x1, y1, th1, gx, gy, gth)
        except (ValueError, ZeroDivisionError) as exc:
            aborted = f"step {i}: {exc}"
            break
        if not (rho1 < math.inf and th1 == th1):
            aborted = f"step {i}: non-finite state ({x1}, {y1}, {th1})"
            break
        if local:
            V0 = V_next if v_local_prev else v_local_xyz(rho, al, be)
            V_next = v_local_xyz(rho1, al1, be1)
        else:
            V0 = V_next if V_next is not None else v_global_xyz(rho, al, be, h)
            V_next = v_global_xyz(rho1, al1, be1, h)
        v_local_prev = local
        V1 = V_next
        rows.append((i, i * Ts, x, y, th, rho, al, be, rm, am, bm, th_m,
                     -v if backward else v, w, local, backward, V0, V1 - V0))
        x, y, th, rho, al, be = x1, y1, th1, rho1, al1, be1

    traj = np.array(rows, dtype=TRAJECTORY_DTYPE)
    if aborted is not None:
        last = Pose(x, y, th)
        result = EpisodeResult(config, traj, last, len(rows), aborted=True)
        raise EpisodeAborted(aborted, result)
    return EpisodeResult(config, traj, Pose(x, y, th), len(rows))


@dataclass(frozen=True)
class Stats:
    mean: float
    median: float
    max: float

    @classmethod
    def of(cls, values) -> "Stats":
        a = np.asarray(values, dtype=float)
        if a.size == 0:
            return cls(math.nan, math.nan, math.nan)
        return cls(float(a.mean()), float(np.median(a)), float(a.max()))


@dataclass
class MonteCarloSummary:
    """Aggregate of ``runs`` episodes; per-run arrays are ordered by run index.

    Final-error arrays hold NaN for aborted runs and the statistics skip them.
    """

    master_seed: int
    law: LawVariant
    runs: int
    seeds: list[int]
    converged: np.ndarray
    aborted: np.ndarray
    final_rho: np.ndarray
    final_theta: np.ndarray
    steps_used: np.ndarray
    max_abs_v: np.ndarray
    backward_steps: np.ndarray
    abort_messages: dict[int, str] = field(default_factory=dict)

    @property
    def success_rate(self) -> float:
        return float(np.count_nonzero(self.converged)) / self.runs

    @property
    def n_aborted(self) -> int:
        return int(np.count_nonzero(self.aborted))

    @property
    def rho_stats(self) -> Stats:
        return Stats.of(self.final_rho[~self.aborted])

    @property
    def theta_stats(self) -> Stats:
        return Stats.of(self.final_theta[~self.aborted])


def run_monte_carlo(config: SimConfig, runs: int, keep: bool = False):
    """Run ``runs`` episodes seeded from (config.seed, run index).

    With ``keep=True`` also returns the list of episode results (None for
    aborted runs).
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    seeds = [derive_seed(config.seed, i) for i in range(runs)]
    conv = np.zeros(runs, bool)
    abort = np.zeros(runs, bool)
    f_rho = np.full(runs, np.nan)
    f_th = np.full(runs, np.nan)
    steps = np.zeros(runs, np.int64)
    vmax = np.full(runs, np.nan)
    nback = np.zeros(runs, np.int64)
    messages = {}
    kept = []
    for i, s in enumerate(seeds):
        try:
            res = run_episode(replace(config, seed=s))
        except EpisodeAborted as exc:
            log.warning("run %d (seed %d) aborted: %s", i, s, exc)
            abort[i] = True
            messages[i] = str(exc)
            steps[i] = exc.result.steps_used
            kept.append(None)
            continue
        conv[i] = res.converged
        f_rho[i] = res.final_rho
        f_th[i] = res.final_errors[2]
        steps[i] = res.steps_used
        tr = res.trajectory
        vmax[i] = float(np.abs(tr["v"]).max()) if len(tr) else 0.0
        nback[i] = int(np.count_nonzero(tr["backward"]))
        if keep:
            kept.append(res)
    summary = MonteCarloSummary(config.seed, config.law, runs, seeds, conv, abort,
                                f_rho, f_th, steps, vmax, nback, messages)
    return (summary, kept) if keep else summary


def ring_starts(goal: Pose, radius: float, n_starts: int, heading: float) -> list[Pose]:
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    if n_starts < 1:
        raise ValueError(f"n_starts must be >= 1, got {n_starts}")
    out = []
    for j in range(n_starts):
        phi = 2.0 * math.pi * j / n_starts
        out.append(Pose(goal.x + radius * math.cos(phi), goal.y + radius * math.sin(phi), heading))
    return out


def ring_experiment(radius: float, n_starts: int, start_heading: float,
                    template: SimConfig) -> list[EpisodeResult]:
    """Episodes from ``n_starts`` evenly spaced points on a circle around the goal."""
    starts = ring_starts(template.goal_pose, radius, n_starts, start_heading)
    return [
        run_episode(replace(template, start_pose=s, seed=derive_seed(template.seed, j)))
        for j, s in enumerate(starts)
    ]

"""Bounded uniform disturbances and their effect on the measured navigation state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NoiseBounds, Pose, wrap_angle
from .kinematics import nav_variables


@dataclass(frozen=True)
class NoiseSample:
    eps_X: float = 0.0
    eps_Y: float = 0.0
    eps_theta: float = 0.0
    eps_v: float = 0.0
    eps_omega: float = 0.0


@dataclass(frozen=True)
class MeasuredNavState:
    """Navigation variables as the controller sees them (noise included)."""

    rho_m: float
    alpha_m: float
    beta_m: float
    theta_m: float


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master_seed: int, index: int) -> int:
    """Independent per-run seed from (master seed, run index)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(2, np.uint64)[0] >> np.uint64(1))


def draw_sample(bounds: NoiseBounds, rng: np.random.Generator) -> NoiseSample:
    """One independent uniform draw on [-max, max] per component."""
    b = np.asarray(bounds.as_tuple())
    return NoiseSample(*rng.uniform(-b, b).tolist())


def draw_block(bounds: NoiseBounds, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` consecutive samples as an (n, 5) array.

    Row i equals the i-th ``draw_sample`` call on the same generator.
    """
    b = np.asarray(bounds.as_tuple())
    return rng.uniform(-b, b, size=(n, 5))


def measure(true_pose: Pose, goal: Pose, sample: NoiseSample) -> MeasuredNavState:
    """Corrupt the pose estimate and re-derive the navigation variables from it."""
    theta_m = wrap_angle(true_pose.theta + sample.eps_theta)
    rho, alpha, beta = nav_variables(
        true_pose.x + sample.eps_X, true_pose.y + sample.eps_Y, theta_m,
        goal.x, goal.y, goal.theta,
    )
    return MeasuredNavState(rho, alpha, beta, theta_m)


def noise_terms(true_pose: Pose, goal: Pose, sample: NoiseSample) -> tuple[float, float, float]:
    """Explicit (eps_rho, eps_alpha, eps_beta) induced by a measurement sample.

    eps_alpha is the bearing perturbation minus eps_theta, so that
    eps_beta = eps_alpha + eps_theta is the bearing perturbation itself.
    """
    rho, alpha, beta = nav_variables(true_pose.x, true_pose.y, true_pose.theta,
                                     goal.x, goal.y, goal.theta)
    m = measure(true_pose, goal, sample)
    eps_beta = wrap_angle(m.beta_m - beta)
    return m.rho_m - rho, wrap_angle(eps_beta - sample.eps_theta), eps_beta


def sample_is_within(sample: NoiseSample, bounds: NoiseBounds) -> bool:
    vals = (sample.eps_X, sample.eps_Y, sample.eps_theta, sample.eps_v, sample.eps_omega)
    return all(abs(v) <= b and math.isfinite(v) for v, b in zip(vals, bounds.as_tuple()))

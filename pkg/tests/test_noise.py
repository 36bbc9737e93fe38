import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from lyapdrive.core import NoiseBounds, Pose
from lyapdrive.kinematics import nav_variables
from lyapdrive.noise import (
    NoiseSample,
    derive_seed,
    draw_block,
    draw_sample,
    make_rng,
    measure,
    noise_terms,
    sample_is_within,
)

REF_NOISE = NoiseBounds.reference()


def test_samples_are_uniform_per_component():
    block = draw_block(REF_NOISE, make_rng(123), 100_000)
    for j, b in enumerate(REF_NOISE.as_tuple()):
        col = block[:, j]
        assert np.all(np.abs(col) <= b)
        p = stats.kstest(col, stats.uniform(loc=-b, scale=2 * b).cdf).pvalue
        assert p >= 0.01, (j, p)


def test_components_are_uncorrelated():
    block = draw_block(REF_NOISE, make_rng(5), 50_000)
    corr = np.corrcoef(block.T)
    off = corr[~np.eye(5, dtype=bool)]
    assert np.max(np.abs(off)) < 0.03


def test_zero_bounds_give_exact_zeros():
    assert draw_sample(NoiseBounds(), make_rng(1)) == NoiseSample()
    assert not draw_block(NoiseBounds(), make_rng(1), 10).any()


def test_same_seed_same_stream():
    a = draw_block(REF_NOISE, make_rng(99), 1000)
    b = draw_block(REF_NOISE, make_rng(99), 1000)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, draw_block(REF_NOISE, make_rng(100), 1000))


def test_block_rows_match_sequential_draws():
    block = draw_block(REF_NOISE, make_rng(3), 20)
    rng = make_rng(3)
    for row in block:
        s = draw_sample(REF_NOISE, rng)
        assert (s.eps_X, s.eps_Y, s.eps_theta, s.eps_v, s.eps_omega) == tuple(row)


def test_derived_seeds_are_stable_and_distinct():
    seeds = [derive_seed(0, i) for i in range(200)]
    assert len(set(seeds)) == 200
    assert seeds == [derive_seed(0, i) for i in range(200)]
    assert derive_seed(1, 0) != derive_seed(0, 0)
    assert all(0 <= s < 2 ** 63 for s in seeds)


def test_measure_without_noise_is_the_true_state():
    pose, goal = Pose(-2, -5.5, math.radians(30)), Pose(0, 0, 0)
    m = measure(pose, goal, NoiseSample())
    assert (m.rho_m, m.alpha_m, m.beta_m) == nav_variables(pose.x, pose.y, pose.theta, 0, 0, 0)
    assert m.theta_m == pose.theta


@pytest.mark.parametrize("sample, expected", [
    (NoiseSample(eps_X=0.3), (-0.3, 0.0, 0.0)),
    (NoiseSample(eps_theta=0.17), (0.0, -0.17, 0.0)),
])
def test_noise_terms_examples(sample, expected):
    assert noise_terms(Pose(0, 0, 0), Pose(1, 0, 0), sample) == pytest.approx(expected, abs=1e-12)


def test_measure_example():
    m = measure(Pose(0, 0, 0), Pose(1, 0, 0), NoiseSample(eps_X=0.3))
    assert (m.rho_m, m.alpha_m, m.beta_m) == pytest.approx((0.7, 0.0, 0.0), abs=1e-12)


def test_heading_noise_moves_alpha_only():
    m = measure(Pose(1, 0, 0), Pose(0, 0, 0), NoiseSample(eps_theta=0.17))
    clean = measure(Pose(1, 0, 0), Pose(0, 0, 0), NoiseSample())
    assert m.rho_m == clean.rho_m
    assert m.beta_m == pytest.approx(clean.beta_m)
    assert math.remainder(m.alpha_m - clean.alpha_m + 0.17, 2 * math.pi) == pytest.approx(0, abs=1e-12)


@settings(max_examples=50)
@given(st.integers(0, 2 ** 32))
def test_drawn_samples_respect_bounds(seed):
    rng = make_rng(seed)
    for _ in range(20):
        assert sample_is_within(draw_sample(REF_NOISE, rng), REF_NOISE)


@given(st.floats(0.5, 20), st.floats(-math.pi, math.pi), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_distance_error_is_bounded_by_position_error(r, phi, ex, ey):
    pose = Pose(r * math.cos(phi), r * math.sin(phi), 0.0)
    e_rho, _, _ = noise_terms(pose, Pose(0, 0, 0), NoiseSample(ex, ey))
    assert abs(e_rho) <= math.hypot(ex, ey) + 1e-12

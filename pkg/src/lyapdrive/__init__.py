"""Two-regime Lyapunov point stabilization of a differential-drive robot
under bounded actuation and measurement noise, in discrete time."""

from .controller import ControllerState, compute_command, global_law, local_law, select_regime
from .core import (
    ControllerParams,
    NavState,
    NoiseBounds,
    Pose,
    Regime,
    RobotGeometry,
    VelocityCommand,
    command_to_wheel_speeds,
    wrap_angle,
)
from .kinematics import AlphaBranch, cartesian_step, classify_alpha, polar_step, to_nav_state
from .noise import MeasuredNavState, NoiseSample, draw_sample, measure
from .simulation import (
    EpisodeAborted,
    EpisodeResult,
    LawVariant,
    MonteCarloSummary,
    SimConfig,
    ring_experiment,
    run_episode,
    run_monte_carlo,
)

__version__ = "0.1.0"

"""Ring experiment: 8 starts on a 12 m circle, start headings 0 and 220 deg.

    python scripts/experiment_b.py [--out results/experiment_b] [--noise-free]
"""
import argparse
import math
from pathlib import Path

import numpy as np

from lyapdrive import NoiseBounds, Pose, SimConfig, ring_experiment
from lyapdrive.report import emit_trajectory


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/experiment_b")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--noise-free", action="store_true")
    args = ap.parse_args()

    bounds = NoiseBounds() if args.noise_free else NoiseBounds.reference()
    template = SimConfig(Pose(0.0, 0.0, 0.0), bounds=bounds, seed=args.seed)
    for deg in (0, 220):
        out = Path(args.out) / f"heading-{deg}"
        results = ring_experiment(12.0, 8, math.radians(deg), template)
        print(f"-- start heading {deg} deg")
        for j, res in enumerate(results):
            emit_trajectory(res, "csv", out / f"start_{j}.csv")
            ex, ey, eth = res.final_errors
            back = np.count_nonzero(res.trajectory["backward"])
            print(f"  start {j}: ({res.config.start_pose.x:6.2f}, {res.config.start_pose.y:6.2f})"
                  f"  final rho={res.final_rho:.4f}  |theta|={eth:.4f}"
                  f"  reverse steps={back}  converged={res.converged}")
        print(f"  plots: python scripts/plot_trajectory.py {out}/start_*.csv --overlay")


if __name__ == "__main__":
    main()

"""Approach experiment: two-regime law vs the global law alone.

    python scripts/experiment_a.py [--out results/experiment_a] [--runs 100]

Writes one trajectory CSV per law plus Monte-Carlo summaries, and prints a
side-by-side table of final errors.
"""
import argparse
import math
from dataclasses import replace
from pathlib import Path

from lyapdrive import NoiseBounds, Pose, SimConfig, run_episode, run_monte_carlo
from lyapdrive.report import emit_summary, emit_trajectory
from lyapdrive.simulation import LawVariant


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/experiment_a")
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)

    base = SimConfig(Pose(-2.0, -5.5, math.radians(30)), bounds=NoiseBounds.reference(), seed=args.seed)
    print(f"{'law':14}{'|x err|':>10}{'|y err|':>10}{'|theta|':>10}"
          f"{'MC med rho':>12}{'MC med |th|':>13}{'success':>9}")
    for law in LawVariant:
        cfg = replace(base, law=law)
        res = run_episode(cfg)
        emit_trajectory(res, "csv", out / f"{law.value}.csv")
        summary = run_monte_carlo(cfg, args.runs)
        emit_summary(summary, out / f"{law.value}-mc")
        ex, ey, eth = res.final_errors
        print(f"{law.value:14}{ex:10.4f}{ey:10.4f}{eth:10.4f}"
              f"{summary.rho_stats.median:12.4f}{summary.theta_stats.median:13.4f}"
              f"{summary.success_rate:9.2f}")
    print(f"plots: python scripts/plot_trajectory.py {out}/two-regime.csv {out}/global-only.csv")


if __name__ == "__main__":
    main()

"""Command-line front end.

    lyapdrive run     [--config F] [--seed N] [--law L] [--out DIR] [--format csv|json]
    lyapdrive mc      [--config F] [--runs N] ...
    lyapdrive ring    [--config F] [--heading 220deg] ...
    lyapdrive analyze TRAJECTORY.csv [--format json]

Without --config each verb runs the reference setup: the (-2, -5.5, 30deg)
approach for run/mc and the 12 m ring for ring. With --config only the
experiments whose mode matches the verb are run (experiments without an
explicit mode are taken as the verb's mode).

Exit status: 0 every episode converged, 2 at least one did not (or aborted),
3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .config import (
    ConfigError,
    ExperimentSpec,
    dump_specs,
    parse_angle,
    parse_config,
    with_overrides,
)
from .core import NoiseBounds, Pose
from .lyapunov import summarize_trace
from .report import emit_summary, emit_trajectory, read_trajectory_csv
from .simulation import EpisodeAborted, SimConfig, ring_experiment, run_episode, run_monte_carlo

log = logging.getLogger("lyapdrive")

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_CONFIG = 0, 2, 3
VERB_MODE = {"run": "single", "mc": "monte_carlo", "ring": "ring"}


def _preset(verb: str, heading: float) -> ExperimentSpec:
    if verb == "ring":
        sim = SimConfig(Pose(0.0, 0.0, heading), bounds=NoiseBounds.reference())
        return ExperimentSpec(f"ring-{math.degrees(heading):g}deg", "ring",
                              sim, heading=heading)
    sim = SimConfig(Pose(-2.0, -5.5, math.radians(30.0)), bounds=NoiseBounds.reference())
    return ExperimentSpec("approach", VERB_MODE[verb], sim)


def _load_specs(args) -> list[ExperimentSpec]:
    mode = VERB_MODE[args.verb]
    if args.config is None:
        heading = parse_angle(args.heading) if getattr(args, "heading", None) else 0.0
        specs = [_preset(args.verb, heading)]
    else:
        specs = [s for s in parse_config(Path(args.config).read_text(), default_mode=mode)
                 if s.mode == mode]
        if not specs:
            log.warning("no '%s' experiments in %s", mode, args.config)
    return [with_overrides(s, seed=args.seed, law=args.law,
                           runs=getattr(args, "runs", None)) for s in specs]


def _out_dir(args, spec: ExperimentSpec) -> Path:
    base = Path(args.out)
    return base / (spec.out or spec.name)


def _write_resolved(spec: ExperimentSpec, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "resolved.yaml").write_text(dump_specs([spec]))


def _cmd_run(args, specs) -> int:
    status = EXIT_OK
    for spec in specs:
        out = _out_dir(args, spec)
        _write_resolved(spec, out)
        try:
            res = run_episode(spec.sim)
        except EpisodeAborted as exc:
            log.error("%s: aborted: %s", spec.name, exc)
            emit_trajectory(exc.result, args.format, out / f"trajectory.{args.format}")
            status = EXIT_NOT_CONVERGED
            continue
        path = emit_trajectory(res, args.format, out / f"trajectory.{args.format}")
        ex, ey, eth = res.final_errors
        print(f"{spec.name}: steps={res.steps_used} converged={res.converged} "
              f"final errors=({ex:.4g} m, {ey:.4g} m, {eth:.4g} rad) -> {path}")
        if not res.converged:
            status = EXIT_NOT_CONVERGED
    return status


def _cmd_mc(args, specs) -> int:
    status = EXIT_OK
    for spec in specs:
        out = _out_dir(args, spec)
        _write_resolved(spec, out)
        summary = run_monte_carlo(spec.sim, spec.runs)
        table, _ = emit_summary(summary, out)
        print(f"== {spec.name} ==")
        print(table, end="")
        if summary.n_aborted:
            print(f"WARNING: {summary.n_aborted} aborted run(s)")
        if summary.success_rate < 1.0:
            status = EXIT_NOT_CONVERGED
    return status


def _cmd_ring(args, specs) -> int:
    status = EXIT_OK
    for spec in specs:
        out = _out_dir(args, spec)
        _write_resolved(spec, out)
        try:
            results = ring_experiment(spec.radius, spec.n_starts, spec.heading, spec.sim)
        except EpisodeAborted as exc:
            log.error("%s: aborted: %s", spec.name, exc)
            status = EXIT_NOT_CONVERGED
            continue
        rows = []
        for j, res in enumerate(results):
            emit_trajectory(res, args.format, out / f"start_{j}.{args.format}")
            ex, ey, eth = res.final_errors
            rows.append({"start": j, "x0": res.config.start_pose.x, "y0": res.config.start_pose.y,
                         "seed": res.config.seed, "converged": res.converged,
                         "steps": res.steps_used, "final_errors": [ex, ey, eth],
                         "backward_steps": int(res.trajectory["backward"].sum())})
            print(f"{spec.name}[{j}]: start=({res.config.start_pose.x:.3f}, "
                  f"{res.config.start_pose.y:.3f}) converged={res.converged} "
                  f"final errors=({ex:.4g}, {ey:.4g}, {eth:.4g})")
            if not res.converged:
                status = EXIT_NOT_CONVERGED
        (out / "ring.json").write_text(json.dumps(rows, indent=2) + "\n")
    return status


def _cmd_analyze(args) -> int:
    cols = read_trajectory_csv(args.trajectory)
    rep = summarize_trace(cols["regime"], cols["V"], cols["dV"])
    if args.format == "json":
        print(json.dumps({"steps": rep.steps, "increases": rep.increases,
                          "max_dV": rep.max_dV, "V_start": rep.V_start,
                          "V_end": rep.V_end, "monotone": rep.monotone}, indent=2))
    else:
        print(f"{'regime':8}{'steps':>8}{'dV>0':>8}{'max dV':>14}")
        for reg in rep.steps:
            print(f"{reg:8}{rep.steps[reg]:8d}{rep.increases[reg]:8d}{rep.max_dV[reg]:14.4g}")
        print(f"V: {rep.V_start:.6g} -> {rep.V_end:.6g}   monotone: {rep.monotone}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lyapdrive", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, help_ in (("run", "single episodes"), ("mc", "Monte-Carlo campaigns"),
                        ("ring", "starts spread on a circle around the goal")):
        p = sub.add_parser(verb, help=help_)
        p.add_argument("--config", help="YAML experiment file")
        p.add_argument("--seed", type=int, help="override the (master) seed")
        p.add_argument("--law", choices=("two-regime", "global-only"))
        p.add_argument("--out", default="results", help="output directory (default: results)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if verb == "mc":
            p.add_argument("--runs", type=int, help="override the number of runs")
        if verb == "ring":
            p.add_argument("--heading", help="start heading for the preset, e.g. 220deg")
    p = sub.add_parser("analyze", help="Lyapunov trace report for a trajectory CSV")
    p.add_argument("trajectory")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.verb == "analyze":
        try:
            return _cmd_analyze(args)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        if getattr(args, "runs", None) is not None and args.runs < 1:
            raise ConfigError("must be >= 1", "runs")
        specs = _load_specs(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    handler = {"run": _cmd_run, "mc": _cmd_mc, "ring": _cmd_ring}[args.verb]
    return handler(args, specs)


if __name__ == "__main__":
    sys.exit(main())

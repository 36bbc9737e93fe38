"""Trajectory and campaign serialization."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import numpy as np

from .config import sim_from_dict, sim_to_dict
from .core import Pose
from .simulation import TRAJECTORY_DTYPE, EpisodeResult, MonteCarloSummary

CSV_COLUMNS = ("step", "t", "x", "y", "theta", "rho", "alpha", "beta",
               "rho_m", "alpha_m", "beta_m", "v", "omega", "regime", "V", "dV")


def _g9(value: float) -> str:
    return f"{value:.9g}"


def trajectory_csv(result: EpisodeResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    tr = result.trajectory
    for row in tr:
        out = []
        for col in CSV_COLUMNS:
            if col == "step":
                out.append(str(int(row["step"])))
            elif col == "regime":
                out.append("LOCAL" if row["local"] else "GLOBAL")
            else:
                out.append(_g9(float(row[col])))
        w.writerow(out)
    return buf.getvalue()


def episode_to_dict(result: EpisodeResult) -> dict[str, Any]:
    tr = result.trajectory
    p = result.final_pose
    return {
        "config": sim_to_dict(result.config),
        "steps_used": result.steps_used,
        "aborted": result.aborted,
        "converged": result.converged,
        "final_pose": [p.x, p.y, p.theta],
        "final_errors": list(result.final_errors),
        "trajectory": {name: tr[name].tolist() for name in TRAJECTORY_DTYPE.names},
    }


def episode_from_dict(d: dict[str, Any]) -> EpisodeResult:
    cols = d["trajectory"]
    n = len(cols["step"])
    tr = np.zeros(n, dtype=TRAJECTORY_DTYPE)
    for name in TRAJECTORY_DTYPE.names:
        tr[name] = cols[name]
    return EpisodeResult(sim_from_dict(d["config"]), tr, Pose(*d["final_pose"]),
                         d["steps_used"], d["aborted"])


def emit_trajectory(result: EpisodeResult, fmt: str, path: str | Path) -> Path:
    """Write one episode as ``csv`` (9 significant digits) or lossless ``json``."""
    path = Path(path)
    if fmt == "csv":
        text = trajectory_csv(result)
    elif fmt == "json":
        text = json.dumps(episode_to_dict(result)) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write trajectory to {path}: {exc}") from exc
    return path


def load_episode_json(path: str | Path) -> EpisodeResult:
    return episode_from_dict(json.loads(Path(path).read_text()))


def read_trajectory_csv(path: str | Path) -> dict[str, list]:
    """Columns of a trajectory CSV; numbers as floats, ``regime`` as strings."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        cols: dict[str, list] = {c: [] for c in CSV_COLUMNS}
        for row in reader:
            for c in CSV_COLUMNS:
                cols[c].append(row[c] if c == "regime" else float(row[c]))
    return cols


def _stats_dict(s) -> dict[str, float]:
    return {"mean": s.mean, "median": s.median, "max": s.max}


def summary_to_dict(summary: MonteCarloSummary) -> dict[str, Any]:
    return {
        "runs": summary.runs,
        "success_rate": summary.success_rate,
        "aborted": summary.n_aborted,
        "final_rho": _stats_dict(summary.rho_stats),
        "final_theta": _stats_dict(summary.theta_stats),
        "max_abs_v": float(np.nanmax(summary.max_abs_v)) if summary.runs > summary.n_aborted else None,
        "master_seed": summary.master_seed,
        "law": summary.law.value,
        "seeds": list(summary.seeds),
        "abort_messages": {str(k): v for k, v in summary.abort_messages.items()},
    }


def summary_table(summary: MonteCarloSummary) -> str:
    r, t = summary.rho_stats, summary.theta_stats
    lines = [
        f"law           {summary.law.value}",
        f"master seed   {summary.master_seed}",
        f"runs          {summary.runs}",
        f"converged     {int(summary.converged.sum())}  (success rate {summary.success_rate:.3f})",
        f"aborted       {summary.n_aborted}",
        "",
        f"{'':14}{'mean':>12}{'median':>12}{'max':>12}",
        f"{'final rho [m]':14}{r.mean:12.5g}{r.median:12.5g}{r.max:12.5g}",
        f"{'|theta| [rad]':14}{t.mean:12.5g}{t.median:12.5g}{t.max:12.5g}",
    ]
    return "\n".join(lines) + "\n"


def emit_summary(summary: MonteCarloSummary, out_dir: str | Path | None = None):
    """Return (table text, JSON dict); also write both into ``out_dir`` if given."""
    table = summary_table(summary)
    data = summary_to_dict(summary)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "summary.txt").write_text(table)
        (out_dir / "summary.json").write_text(json.dumps(data, indent=2) + "\n")
    return table, data

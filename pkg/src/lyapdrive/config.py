"""Experiment configuration files.

A config is YAML: either a list of experiments or a mapping with an
``experiments`` list. Each experiment is a flat mapping; every key except
``name`` (and ``start_*`` for non-ring modes) has a default taken from the
reference robot setup. Angles are radians unless given as a string with a
``deg`` / ``rad`` suffix, e.g. ``start_theta: 30deg``.

Example::

    experiments:
      - name: approach
        start_x: -2
        start_y: -5.5
        start_theta: 30deg
      - name: ring-220
        mode: ring
        radius: 12
        n_starts: 8
        heading: 220deg
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import yaml

from .core import ControllerParams, NoiseBounds, Pose
from .simulation import LawVariant, SimConfig

MODES = ("single", "monte_carlo", "ring")
ANGLE_KEYS = {"start_theta", "goal_theta", "heading", "eps_theta_max"}

_REF = NoiseBounds.reference()
_CTRL = ControllerParams()
_SIM = SimConfig(Pose(0.0, 0.0))

DEFAULTS: dict[str, Any] = {
    "mode": "single",
    "goal_x": 0.0, "goal_y": 0.0, "goal_theta": 0.0,
    "Ts": _SIM.Ts, "max_steps": _SIM.max_steps,
    "rho_tol": _SIM.rho_tol, "theta_tol": _SIM.theta_tol,
    "gamma": _CTRL.gamma, "k": _CTRL.k, "h": _CTRL.h, "k2": _CTRL.k2,
    "eps_P": _CTRL.eps_P, "omega_max": None,
    **_REF.as_dict(),
    "seed": 0, "law": LawVariant.TWO_REGIME.value,
    "runs": 100, "radius": 12.0, "n_starts": 8, "heading": 0.0,
    "out": None,
}
REQUIRED = {"name"}
KNOWN = REQUIRED | set(DEFAULTS) | {"start_x", "start_y", "start_theta"}
INT_KEYS = {"max_steps", "seed", "runs", "n_starts"}
STR_KEYS = {"name", "mode", "law", "out"}

_ANGLE_RE = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*(deg|°|rad)\s*$")


class ConfigError(ValueError):
    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        what = f"key '{key}': " if key is not None else ""
        super().__init__(f"{where}{what}{message}")
        self.key = key
        self.line = line


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    mode: str
    sim: SimConfig
    runs: int = 100
    radius: float = 12.0
    n_starts: int = 8
    heading: float = 0.0
    out: str | None = None


def parse_angle(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("expected an angle, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _ANGLE_RE.match(value)
        if m:
            num = float(m.group(1))
            return math.radians(num) if m.group(2) in ("deg", "°") else num
    raise ValueError(f"expected radians or a '<number>deg' string, got {value!r}")


def _coerce(key: str, value: Any) -> Any:
    if key in ANGLE_KEYS:
        return parse_angle(value)
    if key in STR_KEYS:
        if value is None and key == "out":
            return None
        if not isinstance(value, str):
            raise ValueError(f"expected a string, got {value!r}")
        return value
    if key == "omega_max" and value is None:
        return None
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if key in INT_KEYS:
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if not isinstance(value, int):
            raise ValueError(f"expected an integer, got {value!r}")
        return value
    if isinstance(value, str):
        # PyYAML reads "1e-5" (no dot) as a string
        try:
            return float(value)
        except ValueError:
            pass
    if not isinstance(value, (int, float)):
        raise ValueError(f"expected a number, got {value!r}")
    return float(value)


def _build(fields: dict[str, Any]) -> ExperimentSpec:
    mode = fields["mode"]
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}, expected one of {MODES}", "mode")
    try:
        law = LawVariant(fields["law"])
    except ValueError:
        raise ConfigError(f"unknown law {fields['law']!r}", "law") from None
    if mode == "ring":
        start = Pose(fields["goal_x"], fields["goal_y"], fields["heading"])
    else:
        start = Pose(fields["start_x"], fields["start_y"], fields["start_theta"])
    sim = SimConfig(
        start_pose=start,
        goal_pose=Pose(fields["goal_x"], fields["goal_y"], fields["goal_theta"]),
        Ts=fields["Ts"], max_steps=fields["max_steps"],
        rho_tol=fields["rho_tol"], theta_tol=fields["theta_tol"],
        controller=ControllerParams(fields["gamma"], fields["k"], fields["h"], fields["k2"],
                                    fields["eps_P"], fields["omega_max"]),
        bounds=NoiseBounds(fields["eps_X_max"], fields["eps_Y_max"], fields["eps_theta_max"],
                           fields["eps_v_max"], fields["eps_omega_max"]),
        seed=fields["seed"], law=law,
    )
    if fields["runs"] < 1:
        raise ConfigError("must be >= 1", "runs")
    if fields["n_starts"] < 1:
        raise ConfigError("must be >= 1", "n_starts")
    if not fields["radius"] > 0:
        raise ConfigError("must be > 0", "radius")
    return ExperimentSpec(fields["name"], mode, sim, fields["runs"], fields["radius"],
                          fields["n_starts"], fields["heading"], fields["out"])


# which constructor argument a validation message belongs to
_MESSAGE_KEYS = ("eps_P", "Ts", "rho_tol", "theta_tol", "max_steps", "seed", "gamma",
                 "k2", "omega_max", "eps_X_max", "eps_Y_max", "eps_theta_max",
                 "eps_v_max", "eps_omega_max", "h", "k", "x", "y")


def _blame(message: str) -> str | None:
    for key in _MESSAGE_KEYS:
        if re.search(rf"\b{re.escape(key)}\b", message):
            return {"x": "start_x", "y": "start_y"}.get(key, key)
    return None


def _experiment_nodes(text: str):
    loader = yaml.SafeLoader(text)
    try:
        root = loader.get_single_node()
        if root is None:
            return []
        data = loader.construct_document(root)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"malformed YAML: {getattr(exc, 'problem', exc)}",
                          line=mark.line + 1 if mark else None) from None
    finally:
        loader.dispose()
    if isinstance(root, yaml.MappingNode):
        if set(data) != {"experiments"}:
            extra = sorted(set(data) - {"experiments"})
            raise ConfigError("top level must hold only 'experiments'",
                              extra[0] if extra else "experiments", root.start_mark.line + 1)
        for k_node, v_node in root.value:
            root = v_node
        data = data["experiments"]
    if not isinstance(root, yaml.SequenceNode) or not isinstance(data, list):
        raise ConfigError("expected a list of experiments", line=root.start_mark.line + 1)
    return list(zip(root.value, data))


def parse_config(text: str, default_mode: str = "single") -> list[ExperimentSpec]:
    """Parse and validate a batch of experiments, applying defaults.

    Experiments without a ``mode`` key get ``default_mode``.
    """
    specs: list[ExperimentSpec] = []
    seen: dict[str, int] = {}
    for node, data in _experiment_nodes(text):
        line0 = node.start_mark.line + 1
        if not isinstance(data, dict):
            raise ConfigError("experiment must be a mapping", line=line0)
        lines = {str(k.value): k.start_mark.line + 1 for k, _ in node.value}
        fields: dict[str, Any] = dict(DEFAULTS, mode=default_mode)
        for key, value in data.items():
            key = str(key)
            if key not in KNOWN:
                raise ConfigError("unknown key", key, lines.get(key, line0))
            try:
                fields[key] = _coerce(key, value)
            except ValueError as exc:
                raise ConfigError(str(exc), key, lines.get(key, line0)) from None
        if "name" not in data:
            raise ConfigError("missing required field", "name", line0)
        if fields["mode"] != "ring":
            missing = [k for k in ("start_x", "start_y") if k not in data]
            if missing:
                raise ConfigError("missing required field", missing[0], line0)
            fields.setdefault("start_theta", 0.0)
        name = fields["name"]
        if name in seen:
            raise ConfigError(f"duplicate experiment name {name!r} (first at line {seen[name]})",
                              "name", lines.get("name", line0))
        seen[name] = lines.get("name", line0)
        try:
            specs.append(_build(fields))
        except ConfigError as exc:
            if exc.line is None:
                raise ConfigError(str(exc).split(": ", 1)[-1], exc.key,
                                  lines.get(exc.key or "", line0)) from None
            raise
        except ValueError as exc:
            key = _blame(str(exc))
            raise ConfigError(str(exc), key, lines.get(key or "", line0)) from None
    return specs


def sim_to_dict(sim: SimConfig) -> dict[str, Any]:
    c, b = sim.controller, sim.bounds
    return {
        "start_x": sim.start_pose.x, "start_y": sim.start_pose.y,
        "start_theta": sim.start_pose.theta,
        "goal_x": sim.goal_pose.x, "goal_y": sim.goal_pose.y, "goal_theta": sim.goal_pose.theta,
        "Ts": sim.Ts, "max_steps": sim.max_steps,
        "rho_tol": sim.rho_tol, "theta_tol": sim.theta_tol,
        "gamma": c.gamma, "k": c.k, "h": c.h, "k2": c.k2, "eps_P": c.eps_P,
        "omega_max": c.omega_max,
        **b.as_dict(),
        "seed": sim.seed, "law": sim.law.value,
    }


def sim_from_dict(d: dict[str, Any]) -> SimConfig:
    return SimConfig(
        start_pose=Pose(d["start_x"], d["start_y"], d["start_theta"]),
        goal_pose=Pose(d["goal_x"], d["goal_y"], d["goal_theta"]),
        Ts=d["Ts"], max_steps=d["max_steps"], rho_tol=d["rho_tol"], theta_tol=d["theta_tol"],
        controller=ControllerParams(d["gamma"], d["k"], d["h"], d["k2"], d["eps_P"],
                                    d.get("omega_max")),
        bounds=NoiseBounds(d["eps_X_max"], d["eps_Y_max"], d["eps_theta_max"],
                           d["eps_v_max"], d["eps_omega_max"]),
        seed=d["seed"], law=LawVariant(d["law"]),
    )


def spec_to_dict(spec: ExperimentSpec) -> dict[str, Any]:
    """Every field materialized; feeding it back through parse_config gives ``spec``."""
    d = {"name": spec.name, "mode": spec.mode, **sim_to_dict(spec.sim),
         "runs": spec.runs, "radius": spec.radius, "n_starts": spec.n_starts,
         "heading": spec.heading, "out": spec.out}
    if spec.mode == "ring":
        for k in ("start_x", "start_y", "start_theta"):
            del d[k]
    return d


def dump_specs(specs: list[ExperimentSpec]) -> str:
    return yaml.safe_dump({"experiments": [spec_to_dict(s) for s in specs]},
                          sort_keys=False)


def with_overrides(spec: ExperimentSpec, *, seed: int | None = None,
                   law: str | None = None, runs: int | None = None) -> ExperimentSpec:
    sim = spec.sim
    if seed is not None:
        sim = replace(sim, seed=seed)
    if law is not None:
        sim = replace(sim, law=LawVariant(law))
    return replace(spec, sim=sim, runs=runs if runs is not None else spec.runs)


def load_config(path: str | Path) -> list[ExperimentSpec]:
    return parse_config(Path(path).read_text())

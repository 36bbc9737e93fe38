import json
import math
from pathlib import Path

import numpy as np
import pytest

from lyapdrive.cli import main
from lyapdrive.config import ConfigError, dump_specs, parse_angle, parse_config
from lyapdrive.core import NoiseBounds, Pose
from lyapdrive.report import (
    CSV_COLUMNS,
    emit_summary,
    emit_trajectory,
    episode_from_dict,
    episode_to_dict,
    load_episode_json,
    read_trajectory_csv,
    trajectory_csv,
)
from lyapdrive.simulation import LawVariant, SimConfig, run_episode, run_monte_carlo

START = Pose(-2.0, -5.5, math.radians(30))

ARRIVES = """\
experiments:
  - name: short
    start_x: -0.4
    start_y: 0
    eps_X_max: 0
    eps_Y_max: 0
    eps_theta_max: 0
    eps_v_max: 0
    eps_omega_max: 0
"""


# --- config -------------------------------------------------------------------

def test_minimal_experiment_gets_reference_defaults():
    (spec,) = parse_config("- name: a\n  start_x: -2\n  start_y: -5.5\n  start_theta: 30deg\n")
    sim = spec.sim
    assert spec.mode == "single"
    assert sim.start_pose == START
    assert sim.Ts == 0.1
    c = sim.controller
    assert (c.gamma, c.k, c.h, c.k2) == (1.3, 1.0, 0.17, 2.7)
    assert sim.bounds == NoiseBounds.reference()
    assert sim.law is LawVariant.TWO_REGIME


def test_ring_spec():
    (spec,) = parse_config("experiments:\n  - name: r\n    mode: ring\n    radius: 12\n"
                           "    n_starts: 8\n    heading: 220deg\n")
    assert spec.mode == "ring"
    assert (spec.radius, spec.n_starts) == (12.0, 8)
    assert spec.heading == pytest.approx(math.radians(220))


@pytest.mark.parametrize("text, key, line", [
    ("- name: a\n  start_x: 0\n  start_y: 1\n  Ts: 0\n", "Ts", 4),
    ("- name: a\n  start_x: 0\n  start_y: 1\n  speed: 2\n", "speed", 4),
    ("- name: a\n  start_x: 0\n", "start_y", 1),
    ("- start_x: 0\n  start_y: 1\n", "name", 1),
    ("- name: a\n  start_x: 0\n  start_y: 1\n- name: a\n  start_x: 1\n  start_y: 1\n", "name", 4),
    ("- name: a\n  start_x: 0\n  start_y: 1\n  runs: 0\n", "runs", 4),
    ("- name: a\n  start_x: 0\n  start_y: 1\n  eps_P: 0.2\n", "eps_P", 4),
    ("- name: a\n  start_x: 0\n  start_y: 1\n  start_theta: north\n", "start_theta", 4),
    ("- name: a\n  start_x: 0\n  start_y: 1\n  law: magic\n", "law", 4),
])
def test_config_errors_name_key_and_line(text, key, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key == key
    assert info.value.line == line
    assert f"line {line}" in str(info.value) and key in str(info.value)


def test_malformed_yaml_reports_line():
    with pytest.raises(ConfigError) as info:
        parse_config("- name: a\n  start_x: [1, 2\n")
    assert info.value.line is not None


@pytest.mark.parametrize("value, rad", [
    ("30deg", math.radians(30)), ("220 deg", math.radians(220)), ("0.17rad", 0.17),
    ("90°", math.pi / 2), (0.5, 0.5), (1, 1.0),
])
def test_parse_angle(value, rad):
    assert parse_angle(value) == pytest.approx(rad)


def test_resolved_specs_round_trip():
    text = ("- name: a\n  start_x: -2\n  start_y: -5.5\n  start_theta: 30deg\n  seed: 7\n"
            "- name: r\n  mode: ring\n  heading: 220deg\n  law: global-only\n")
    specs = parse_config(text)
    assert parse_config(dump_specs(specs)) == specs


# --- report -------------------------------------------------------------------

def test_one_step_csv():
    res = run_episode(SimConfig(START, max_steps=1))
    text = trajectory_csv(res)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 2
    row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    rec = res.trajectory[0]
    assert row["regime"] == "GLOBAL"
    for col in ("x", "y", "theta", "rho", "alpha", "beta", "v", "omega", "V", "dV"):
        assert float(row[col]) == pytest.approx(float(rec[col]), rel=1e-8, abs=1e-300)
        assert float(row[col]) == float(f"{float(rec[col]):.9g}")


def test_csv_reader(tmp_path):
    res = run_episode(SimConfig(START, bounds=NoiseBounds.reference(), max_steps=500))
    path = emit_trajectory(res, "csv", tmp_path / "t.csv")
    cols = read_trajectory_csv(path)
    assert len(cols["step"]) == 500
    assert set(cols["regime"]) <= {"GLOBAL", "LOCAL"}
    assert np.allclose(cols["rho"], res.trajectory["rho"], rtol=1e-8)


def test_json_round_trip(tmp_path):
    res = run_episode(SimConfig(START, bounds=NoiseBounds.reference(), seed=4, max_steps=300))
    assert episode_from_dict(json.loads(json.dumps(episode_to_dict(res)))) == res
    path = emit_trajectory(res, "json", tmp_path / "t.json")
    assert load_episode_json(path) == res


def test_write_failure_names_the_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    res = run_episode(SimConfig(START, max_steps=1))
    with pytest.raises(OSError, match="file"):
        emit_trajectory(res, "csv", blocker / "sub" / "t.csv")


def test_summary_zero_noise(tmp_path):
    cfg = SimConfig(Pose(-0.4, 0.0, 0.0))
    table, data = emit_summary(run_monte_carlo(cfg, 3), tmp_path)
    assert data["success_rate"] == 1.0
    assert data["final_rho"]["max"] == data["final_rho"]["mean"]
    for key in ("runs", "success_rate", "final_rho", "final_theta", "master_seed"):
        assert key in data
    assert "success rate 1.000" in table
    assert json.loads((tmp_path / "summary.json").read_text()) == data


# --- command line -------------------------------------------------------------

def _write(tmp_path, text):
    path = tmp_path / "exp.yaml"
    path.write_text(text)
    return str(path)


def test_run_converged_exit_zero(tmp_path, capsys):
    cfg = _write(tmp_path, ARRIVES)
    assert main(["run", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    assert "converged=True" in capsys.readouterr().out
    assert (tmp_path / "o" / "short" / "trajectory.csv").exists()


def test_run_not_converged_exit_two(tmp_path):
    out = tmp_path / "o"
    cfg = _write(tmp_path, "- name: a\n  start_x: -2\n  start_y: -5.5\n  max_steps: 20\n")
    assert main(["run", "--config", cfg, "--out", str(out)]) == 2


def test_config_error_exit_three(tmp_path, capsys):
    cfg = _write(tmp_path, "- name: a\n  start_x: 0\n  start_y: 1\n  Ts: 0\n")
    assert main(["run", "--config", cfg, "--out", str(tmp_path)]) == 3
    assert "line 4" in capsys.readouterr().err


def test_csv_is_byte_identical_across_runs(tmp_path):
    cfg = _write(tmp_path, "- name: a\n  start_x: -2\n  start_y: -5.5\n  start_theta: 30deg\n"
                           "  max_steps: 800\n  seed: 11\n")
    for d in ("a1", "a2"):
        main(["run", "--config", cfg, "--out", str(tmp_path / d)])
    one = (tmp_path / "a1" / "a" / "trajectory.csv").read_bytes()
    two = (tmp_path / "a2" / "a" / "trajectory.csv").read_bytes()
    assert one == two and len(one) > 10_000


def test_resolved_spec_reproduces_the_run(tmp_path):
    cfg = _write(tmp_path, "- name: a\n  start_x: -2\n  start_y: -5.5\n  max_steps: 300\n")
    main(["run", "--config", cfg, "--seed", "5", "--out", str(tmp_path / "first")])
    resolved = tmp_path / "first" / "a" / "resolved.yaml"
    main(["run", "--config", str(resolved), "--out", str(tmp_path / "again")])
    assert ((tmp_path / "first" / "a" / "trajectory.csv").read_bytes()
            == (tmp_path / "again" / "a" / "trajectory.csv").read_bytes())
    (spec,) = parse_config(resolved.read_text())
    assert spec.sim.seed == 5


def test_mc_writes_summary(tmp_path, capsys):
    cfg = _write(tmp_path, ARRIVES.replace("name: short", "name: camp") + "    runs: 3\n")
    assert main(["mc", "--config", cfg, "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "camp" / "summary.json").read_text())
    assert data["runs"] == 3 and data["success_rate"] == 1.0
    assert "master seed" in capsys.readouterr().out


def test_mc_aborted_run_is_surfaced(tmp_path, monkeypatch, capsys):
    import lyapdrive.simulation as simmod
    from lyapdrive.simulation import EpisodeAborted

    real = simmod.run_episode
    calls = []

    def flaky(config):
        calls.append(config.seed)
        res = real(config)
        if len(calls) == 2:
            raise EpisodeAborted("synthetic failure", res)
        return res

    monkeypatch.setattr(simmod, "run_episode", flaky)
    cfg = _write(tmp_path, ARRIVES + "    runs: 3\n")
    assert main(["mc", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "1 aborted" in capsys.readouterr().out
    data = json.loads((tmp_path / "short" / "summary.json").read_text())
    assert data["aborted"] == 1


def test_ring_verb(tmp_path):
    cfg = _write(tmp_path, "- name: tiny\n  mode: ring\n  radius: 0.4\n  n_starts: 2\n"
                           "  eps_X_max: 0\n  eps_Y_max: 0\n  eps_theta_max: 0\n"
                           "  eps_v_max: 0\n  eps_omega_max: 0\n")
    assert main(["ring", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "tiny" / "ring.json").read_text())
    assert [r["converged"] for r in rows] == [True, True]
    assert rows[0]["backward_steps"] > 0
    assert (tmp_path / "tiny" / "start_1.csv").exists()


def test_analyze(tmp_path, capsys):
    cfg = _write(tmp_path, ARRIVES)
    main(["run", "--config", cfg, "--out", str(tmp_path)])
    capsys.readouterr()
    csv_path = tmp_path / "short" / "trajectory.csv"
    assert main(["analyze", str(csv_path), "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["monotone"] is True
    assert rep["steps"]["LOCAL"] > 0
    assert main(["analyze", str(tmp_path / "missing.csv")]) == 3


def test_law_override(tmp_path):
    cfg = _write(tmp_path, "- name: a\n  start_x: -2\n  start_y: -5.5\n  max_steps: 200\n")
    main(["run", "--config", cfg, "--law", "global-only", "--format", "json",
          "--out", str(tmp_path)])
    res = load_episode_json(Path(tmp_path) / "a" / "trajectory.json")
    assert res.config.law is LawVariant.GLOBAL_ONLY

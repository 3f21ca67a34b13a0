"""End-to-end command-line behavior: reports, artifacts, exit codes."""
import json
import subprocess
import sys

import numpy as np
import pytest

import fluxline as fl
from fluxline.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_link_preset_hopf(capsys):
    code, out, _ = run(["link", "--preset", "hopf"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["agree"] is True
    assert rep["rounded"] in (-1, 1)
    assert rep["residual"] < 1e-6
    assert rep["crossing_count"] == rep["rounded"]
    assert rep["config"]["samples"] == 1024


def test_link_preset_unlinked(capsys):
    code, out, _ = run(["link", "--preset", "unlinked"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["rounded"] == 0
    assert rep["agree"] is True


def test_link_preset_l2(capsys):
    code, out, _ = run(["link", "--preset", "l2"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["rounded"]) == 2
    assert rep["agree"] is True


def test_link_curve_files(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    fl.save_curve(fl.make_circle((0, 0, 0), 1.0, (0, 0, 1), 256), a)
    fl.save_curve(fl.make_circle((1, 0, 0), 1.0, (0, 1, 0), 256), b)
    code, out, _ = run(["link", "--curve-a", str(a), "--curve-b", str(b)], capsys)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["rounded"]) == 1
    assert rep["agree"] is True


def test_link_missing_inputs(capsys):
    code, _, err = run(["link"], capsys)
    assert code == 2
    assert "preset" in err


def test_link_malformed_curve_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [[0,0,0],')
    good = tmp_path / "good.json"
    fl.save_curve(fl.make_circle((0, 0, 0), 1.0, (0, 0, 1), 64), good)
    code, _, err = run(
        ["link", "--curve-a", str(bad), "--curve-b", str(good)], capsys)
    assert code == 2
    assert "line 1" in err and "column" in err


def test_link_under_resolved_still_reports(capsys):
    code, out, _ = run(["link", "--preset", "hopf", "--samples", "8"], capsys)
    assert code == 3
    rep = json.loads(out)
    assert rep["residual"] >= 1e-3
    assert rep["agree"] is False


def test_config_file_overrides_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 2.0, "samples": 256}))
    code, out, _ = run(["phase", "--config", str(cfg)], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["config"]["alpha"] == 2.0
    assert rep["config"]["samples"] == 256
    assert rep["forms"]["topological"] == pytest.approx(2.0)


def test_flags_beat_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 2.0, "samples": 256}))
    code, out, _ = run(
        ["phase", "--config", str(cfg), "--alpha", "1.5"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["config"]["alpha"] == 1.5
    assert rep["config"]["samples"] == 256


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alfa": 2.0}))
    code, _, err = run(["phase", "--config", str(cfg)], capsys)
    assert code == 2
    assert "unknown config keys" in err and "alfa" in err


def test_config_malformed_json(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{\n  broken\n}")
    code, _, err = run(["phase", "--config", str(cfg)], capsys)
    assert code == 2
    assert "line 2" in err


def test_phase_report_forms(capsys):
    code, out, _ = run(
        ["phase", "--preset", "hopf", "--samples", "512"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert set(rep["forms"]) == {
        "topological", "circulation", "flux", "solid_angle", "crossing"}
    assert rep["linking"] in (-1, 1)
    assert rep["max_spread"] < 1e-3


def test_phase_invariance_clearance_violation(capsys):
    code, _, err = run(
        ["phase", "--preset", "hopf", "--samples", "128", "--invariance",
         "--clearance", "2.0"], capsys)
    assert code == 4
    assert "clearance" in err


def test_field_profile_csv(tmp_path, capsys):
    out_path = tmp_path / "field.csv"
    code, out, _ = run(
        ["field", "--from", "0", "--to", "2", "--steps", "5",
         "-o", str(out_path)], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "z,A_x,A_y,A_z,A_axial_analytic"
    assert len(lines) == 6
    for row in lines[1:]:
        z, ax, ay, az, ref = (float(v) for v in row.split(","))
        assert abs(ax) < 1e-12 and abs(ay) < 1e-12
        assert abs(az - ref) < 1e-6
    assert out_path.read_text() == out
    sidecar = json.loads(out_path.with_suffix(".json").read_text())
    assert sidecar["config"]["steps"] == 5


def test_interfere_artifacts(tmp_path, capsys):
    code, out, _ = run(
        ["interfere", "--alpha", "3.14159", "-o", str(tmp_path)], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["rel_err"] < 0.02
    assert (tmp_path / "pattern_off.csv").exists()
    assert (tmp_path / "pattern_on.csv").exists()
    assert (tmp_path / "report.json").read_text() == out
    off_lines = (tmp_path / "pattern_off.csv").read_text().splitlines()
    assert off_lines[0] == "x_b,density"
    assert len(off_lines) == rep["config"]["n_grid"] + 1


def test_gauge_demo_solenoid_defaults(capsys):
    code, out, _ = run(["gauge-demo", "--solenoid"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["circ_A"] - 1.0) < 1e-8
    assert rep["circ_Aprime"] == 0.0
    assert abs(rep["string_flux"] + 1.0) < 1e-8
    assert rep["winding"] == 1


def test_gauge_demo_solenoid_three_turns(capsys):
    code, out, _ = run(
        ["gauge-demo", "--solenoid", "--turns", "3", "--flux", "0.5"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["circ_A"] - 1.5) < 1e-8
    assert abs(rep["string_flux"] + 1.5) < 1e-8
    assert rep["winding"] == 3


def test_gauge_demo_closed_line(capsys):
    code, out, _ = run(
        ["gauge-demo", "--closed-line", "--samples", "512"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["before"] - 1.0) < 1e-4
    assert rep["after"] == 0.0


def test_sweep_alpha_periodic(capsys):
    code, out, _ = run(
        ["sweep", "--param", "alpha", "--from", "0", "--to",
         "6.283185307179586", "--steps", "8", "--grid", "1024"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "param,value,shift_measured,shift_analytic,rel_err"
    assert len(lines) == 9
    first = float(lines[1].split(",")[2])
    last = float(lines[8].split(",")[2])
    spacing = fl.fringe_spacing(fl.TwoSlitConfig())
    wrapped = (last - first) - round((last - first) / spacing) * spacing
    assert abs(wrapped) < 0.01 * spacing


def test_sweep_rejects_unknown_parameter(capsys):
    code, _, err = run(
        ["sweep", "--param", "radius", "--steps", "2"], capsys)
    assert code == 2
    assert "radius" in err


def test_repeat_runs_byte_identical(tmp_path, capsys):
    argv = ["link", "--preset", "l2", "--samples", "512", "--seed", "5"]
    _, out1, _ = run(argv, capsys)
    _, out2, _ = run(argv, capsys)
    assert out1 == out2
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    for d in (d1, d2):
        run(["interfere", "--alpha", "1.0", "--grid", "512", "-o", str(d)],
            capsys)
    for name in ("pattern_off.csv", "pattern_on.csv", "report.json"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_thread_count_does_not_change_results(capsys):
    base = ["link", "--preset", "hopf", "--samples", "512"]
    _, out1, _ = run(base + ["--threads", "1"], capsys)
    _, out4, _ = run(base + ["--threads", "4"], capsys)
    rep1, rep4 = json.loads(out1), json.loads(out4)
    assert rep1["raw"] == rep4["raw"]
    assert rep1["residual"] == rep4["residual"]


def test_threads_env_var(monkeypatch, capsys):
    argv = ["link", "--preset", "hopf", "--samples", "256"]
    _, flagged, _ = run(argv + ["--threads", "2"], capsys)
    monkeypatch.setenv("FLUXLINE_THREADS", "2")
    _, from_env, _ = run(argv, capsys)
    assert json.loads(from_env)["raw"] == json.loads(flagged)["raw"]


def test_help_lists_subcommands_and_exit_codes():
    proc = subprocess.run(
        [sys.executable, "-m", "fluxline.cli", "--help"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    for word in ("link", "phase", "field", "interfere", "gauge-demo",
                 "sweep", "Exit codes"):
        assert word in proc.stdout

import csv
import json
import math
import subprocess
import sys
from dataclasses import replace

import pytest

from rotweingarten.cli import main, run_sweep
from rotweingarten.config import parse_config


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("spec,code", [("zero", 0), ("rational:c=1.53", 0), ("rational:c=1.55", 2),
                                       ("rational:c=2", 2), ("sqrtshift:a=1", 0)])
def test_check_f(spec, code, capsys):
    rc, out, _ = run(["check-f", spec], capsys)
    assert rc == code
    rep = json.loads(out)
    assert rep["admissible"] is (code == 0)
    if spec == "rational:c=2":
        assert rep["sup_value"] == pytest.approx(27 / 16, rel=1e-15)


@pytest.mark.parametrize("spec", ["rational:c=", "cubic", "rational:c=abc"])
def test_check_f_parse_error(spec, capsys):
    rc, out, err = run(["check-f", spec], capsys)
    assert rc == 1 and out == ""
    assert "error" in err or "'" in err


def test_usage_errors_exit_one(capsys):
    assert run([], capsys)[0] == 1
    assert run(["bogus"], capsys)[0] == 1
    assert run(["trace", "--epsilon", "3"], capsys)[0] == 1
    assert run(["trace", "--phi0", "abc"], capsys)[0] == 1


def test_trace_catenoid(tmp_path, capsys):
    rc, _, _ = run(["trace", "--family", "zero", "--epsilon", "-1", "--phi0", "1", "--s-max", "20",
                    "--output-dir", str(tmp_path), "--mesh-theta-segments", "8"], capsys)
    assert rc == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["kind"] == "Catenoidal"
    assert rep["gate_lhs"] == pytest.approx(1 / math.tanh(1.0), rel=1e-15)
    assert rep["gate_rhs"] == "inf"
    with open(tmp_path / "profile.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["s", "phi", "phi_p", "t", "t_p", "k1", "k2", "H", "Ke"]
    assert (tmp_path / "surface.obj").exists()
    assert json.loads((tmp_path / "profile.json").read_text())["termination"]["kind"] == "Completed"


def test_trace_gate_failure(tmp_path, capsys):
    rc, _, err = run(["trace", "--family", "sqrtshift:a=1", "--epsilon", "-1", "--phi0", "1",
                      "--output-dir", str(tmp_path)], capsys)
    assert rc == 3
    gate = json.loads((tmp_path / "gate.json").read_text())
    assert gate["lhs"] == pytest.approx(1 / math.tanh(1.0), rel=1e-15)
    assert gate["rhs"] == 1.0
    assert gate["holds"] is False
    assert not (tmp_path / "profile.csv").exists()
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["kind"] == "GATE_FAIL" and rep["gate_rhs"] == 1.0


def test_trace_cylinder_from_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"family = zero\nepsilon = 1\nphi0 = pi/2\noutput_dir = {tmp_path / 'out'}\n")
    rc, _, _ = run(["trace", "--config", str(cfg), "--no-mesh"], capsys)
    assert rc == 0
    assert json.loads((tmp_path / "out" / "report.json").read_text())["kind"] == "Cylinder"
    assert not (tmp_path / "out" / "surface.obj").exists()


def test_override_beats_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family = zero\nepsilon = 1\nphi0 = pi/2\n")
    rc, out, _ = run(["classify", "--config", str(cfg), "--epsilon", "-1", "--phi0", "1"], capsys)
    assert rc == 0 and json.loads(out)["kind"] == "Catenoidal"


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("WG_OUTPUT_DIR", str(tmp_path / "env"))
    rc, _, _ = run(["trace", "--family", "zero", "--epsilon", "1", "--phi0", "pi/2", "--no-mesh"], capsys)
    assert rc == 0 and (tmp_path / "env" / "report.json").exists()


def test_inadmissible_family_exits_two(tmp_path, capsys):
    rc, out, _ = run(["trace", "--family", "rational:c=2", "--output-dir", str(tmp_path)], capsys)
    assert rc == 2 and json.loads(out)["admissible"] is False


def test_io_error_exits_four(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    rc, _, _ = run(["trace", "--family", "zero", "--epsilon", "1", "--phi0", "pi/2",
                    "--output-dir", str(blocker / "sub")], capsys)
    assert rc == 4


def test_step_limit_exits_five(tmp_path, capsys, monkeypatch):
    from rotweingarten import cli
    orig = cli.shooting_spec
    monkeypatch.setattr(cli, "shooting_spec", lambda cfg: replace(orig(cfg), max_steps=3))
    rc, _, err = run(["trace", "--family", "zero", "--phi0", "1", "--output-dir", str(tmp_path)], capsys)
    assert rc == 5 and "StepLimit" in err


def test_mesh_command(tmp_path, capsys):
    rc, _, _ = run(["mesh", "--family", "zero", "--epsilon", "1", "--phi0", "pi/2",
                    "--mesh-theta-segments", "8", "--output-dir", str(tmp_path)], capsys)
    assert rc == 0
    lines = (tmp_path / "surface.obj").read_text().splitlines()
    v = [ln for ln in lines if ln.startswith("v ")]
    assert all(ln.split()[3] == "0" for ln in v)
    assert len(v) % 8 == 0


def test_mesh_poincare(tmp_path, capsys):
    rc, _, _ = run(["mesh", "--family", "zero", "--epsilon", "-1", "--phi0", "1", "--poincare",
                    "--output-dir", str(tmp_path)], capsys)
    assert rc == 0
    v = [ln.split() for ln in (tmp_path / "surface.obj").read_text().splitlines() if ln.startswith("v ")]
    assert all(len(x) == 4 for x in v)  # tag plus three coordinates


def test_mesh_gate_failure(tmp_path, capsys):
    rc, _, _ = run(["mesh", "--family", "sqrtshift:a=1", "--epsilon", "-1", "--phi0", "1",
                    "--output-dir", str(tmp_path)], capsys)
    assert rc == 3 and (tmp_path / "gate.json").exists()


def test_sweep_existence_gate(tmp_path, capsys):
    rc, _, _ = run(["sweep", "--family", "sqrtshift:a=1", "--epsilon", "1",
                    "--sweep-range", "pi/8,3*pi/8,5", "--output-dir", str(tmp_path)], capsys)
    assert rc == 0
    with open(tmp_path / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["kind"] for r in rows] == ["GATE_FAIL"] * 3 + ["Unduloidal"] * 2
    for r in rows:
        assert float(r["gate_rhs"]) == 1.0
        assert (float(r["gate_lhs"]) < 1.0) == (r["kind"] == "Unduloidal")
    assert len(list((tmp_path / "sweep").glob("row_*.json"))) == 5


def test_sweep_zero_family_all_succeed(tmp_path, capsys):
    rc, _, _ = run(["sweep", "--family", "zero", "--epsilon", "1", "--sweep-range", "0.2,1.5,4",
                    "--output-dir", str(tmp_path)], capsys)
    assert rc == 0
    with open(tmp_path / "sweep.csv") as fh:
        assert all(r["kind"] == "Unduloidal" for r in csv.DictReader(fh))


def test_sweep_all_fail_exits_five(tmp_path, capsys):
    rc, _, _ = run(["sweep", "--family", "sqrtshift:a=1", "--epsilon", "-1", "--sweep-range", "0.5,2,3",
                    "--output-dir", str(tmp_path)], capsys)
    assert rc == 5


@pytest.mark.parametrize("extra", [[], ["--sweep-range", "0.1,1,1"], ["--sweep-range", "0.1,1"],
                                   ["--sweep-range", "0.1,1,x"]])
def test_sweep_usage_errors(extra, tmp_path, capsys):
    rc, _, _ = run(["sweep", "--family", "zero", "--output-dir", str(tmp_path)] + extra, capsys)
    assert rc == 1


def test_sweep_parallel_matches_serial():
    cfg = parse_config("family = sqrtshift:a=0.5\nepsilon = -1\nsweep_range = 0.3, 1.2, 4\n")
    serial = run_sweep(cfg)
    parallel = run_sweep(cfg, jobs=2)
    assert [r for r, _ in serial] == [r for r, _ in parallel]


def test_python_dash_m(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "rotweingarten", "check-f", "rational:c=1.53"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["admissible"] is True

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from tbgeo.cli import build_config, load_config, main, parse_config_text
from tbgeo.exceptions import AdmissibilityError, ConfigError


def _write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_config_text():
    entries = parse_config_text("# comment\nseed = 4\n\nweights = 1, 0, 1 ; 2,1,3  # two cells\n")
    assert entries == {"seed": "4", "weights": "1, 0, 1 ; 2,1,3"}
    cfg = build_config("verify", entries)
    assert cfg.seed == 4
    assert [w.as_tuple() for w in cfg.weights] == [(1, 0, 1), (2, 1, 3)]


@pytest.mark.parametrize("text", ["seed 4", "colour = red", "seed = 1\nseed = 2", "seed = x",
                                  "weights = 1, 2", "checks = bogus", "tolerance = -1",
                                  "manifold = torus", "weights = 1, nan, 1"])
def test_config_errors(text):
    with pytest.raises((ConfigError, ValueError)):
        build_config("verify", parse_config_text(text))


def test_geodesic_config_errors():
    with pytest.raises(ConfigError):
        build_config("geodesic", {"step": "0"})
    with pytest.raises(ConfigError):
        build_config("geodesic", {"manifold": "sphere2_stereographic"})
    with pytest.raises(ConfigError):
        build_config("geodesic", {"integrator": "euler"})


def test_inadmissible_weights_rejected_at_load():
    with pytest.raises(AdmissibilityError):
        build_config("verify", {"weights": "1, 1, 1"})


def test_overrides_win(tmp_path):
    path = _write(tmp_path, "seed = 1\ntolerance = 0.1\n")
    cfg = load_config("verify", path, {"seed": 9, "tolerance": None})
    assert cfg.seed == 9 and cfg.tolerance == 0.1


def test_verify_default_passes(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert {"config", "checks", "summary"} <= set(doc)
    assert doc["summary"]["pass"] is True
    assert doc["summary"]["max_residual"] < 1e-4
    assert all("pass" in c and "max_residual" in c for c in doc["checks"])
    assert "timestamp" not in json.dumps(doc)


def test_verify_report_byte_identical(tmp_path):
    cfg = _write(tmp_path, "manifold = sphere2_stereographic\nsample_count = 2\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--config", cfg, "--seed", "5", "--out", str(a)]) == 0
    assert main(["verify", "--config", cfg, "--seed", "5", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["config"]["seed"] == 5


def test_verify_inadmissible_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "weights = 1, 1, 1\n")
    assert main(["verify", "--config", cfg]) == 2
    assert "m1*m3 - m2^2 > 0" in capsys.readouterr().err


def test_verify_failure_exits_1(tmp_path):
    cfg = _write(tmp_path, "checks = koszul_items\nmanifold = sphere2_stereographic\nsample_count = 2\n")
    out = tmp_path / "r.json"
    assert main(["verify", "--config", cfg, "--tol", "1e-30", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["summary"]["pass"] is False


def test_usage_errors_exit_2(tmp_path):
    assert main([]) == 2
    assert main(["verify", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_sweep_records_skipped_cells(tmp_path):
    cfg = _write(tmp_path, "checks = so3_closed_form, sasaki_reduction\nmanifold = so3\n"
                           "sample_count = 2\njobs = 2\n")
    out = tmp_path / "sweep.json"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    s = doc["summary"]
    assert s["cells_run"] + len(s["skipped_cells"]) == 125
    assert s["cells_run"] == 107
    assert all(c["condition"] == "m1*m3 - m2^2 > 0" for c in s["skipped_cells"])
    assert len(doc["checks"]) == 2 * 107


def test_geodesic_writes_csv(tmp_path, capsys):
    cfg = _write(tmp_path, "weights = 2, 0.5, 1.5\nomega = 0.3, -0.2, 0.5\nzeta = 0.4, 0.1, -0.3\n"
                           "eta = 0.2, 0.5, 0.1\nduration = 0.5\nstep = 0.01\nrotation_vector = 0.1, 0.2, 0.3\n")
    out = tmp_path / "traj.csv"
    assert main(["geodesic", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["pass"] and summary["relative_energy_drift"] < 1e-6
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t" and rows[0][-1] == "energy" and len(rows) == 52
    assert float(rows[1][10]) == pytest.approx(0.3)


def test_geodesic_drift_failure_exits_1(tmp_path):
    cfg = _write(tmp_path, "weights = 2, 0.5, 1.5\nomega = 3, -2, 5\nzeta = 4, 1, -3\neta = 2, 5, 1\n"
                           "duration = 2\nstep = 0.2\n")
    assert main(["geodesic", "--config", cfg, "--out", str(tmp_path / "t.csv")]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tbgeo", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "tbgeo" in proc.stdout


def test_rotation_matrix_config():
    cfg = build_config("geodesic", {"rotation": "0,-1,0, 1,0,0, 0,0,1"})
    np.testing.assert_array_equal(cfg.rotation, [[0, -1, 0], [1, 0, 0], [0, 0, 1]])

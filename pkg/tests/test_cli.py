import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from lorentz_helix.cli import main
from lorentz_helix.curvefile import REPORT_SCHEMA, read_curve_csv, write_curve_csv
from lorentz_helix.frenet import CurveSamples
from lorentz_helix.synthesis import make_w_curve


@pytest.fixture
def w_csv(tmp_path):
    s = np.linspace(0, 2, 201)
    path = tmp_path / "w.csv"
    write_curve_csv(path, make_w_curve(np.sqrt(2), 1, 1, 1, s))
    return path


def _analyze(tmp_path, csv, *extra):
    report = tmp_path / "report.json"
    code = main(["analyze", "--input", str(csv), "--report", str(report), *extra])
    doc = json.loads(report.read_text()) if report.exists() else None
    if doc is not None:
        jsonschema.validate(doc, REPORT_SCHEMA)
    return code, doc


def test_w_curve_report(tmp_path, w_csv):
    code, doc = _analyze(tmp_path, w_csv)
    assert code == 0
    assert doc["tangent_helix"]["constant"] is True
    assert doc["b2_slant"]["constant"] is True
    assert doc["b2_slant"]["m"] == pytest.approx(-1 / 8, abs=1e-5)


def test_slant_end_to_end(tmp_path):
    out = tmp_path / "slant.csv"
    assert main(["synthesize", "--slant", "1", "2", "--kappa1", "1", "--kappa2", "1", "--range", "0:2", "--step", "0.001", "--out", str(out)]) == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["slant"] == {"C": 1.0, "D": 2.0} and sidecar["max_signature_deviation"] < 1e-8
    code, doc = _analyze(tmp_path, out, "--dump-functions", str(tmp_path / "f.csv"))
    assert code == 0
    assert doc["b2_slant"]["m"] == pytest.approx(-3.0, abs=1e-4)
    header = (tmp_path / "f.csv").read_text().splitlines()[0].split(",")
    assert header[:4] == ["s", "kappa1", "kappa2", "kappa3"] and "H_B" in header and "U_4" in header


def test_constant_curvature_synthesis(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["synthesize", "--kappa1", "1", "--kappa2", "1", "--kappa3", "1", "--range", "0:1", "--out", str(out)]) == 0
    assert len(read_curve_csv(out)) == 1001


def test_zero_kappa3_exits_1(tmp_path, capsys):
    out = tmp_path / "z.csv"
    assert main(["synthesize", "--kappa1", "1", "--kappa2", "1", "--kappa3", "0", "--range", "0:2", "--out", str(out)]) == 1
    assert "kappa3" in capsys.readouterr().err
    assert not out.exists()


def test_parse_error_exits_1(tmp_path, capsys):
    assert main(["synthesize", "--kappa1", "sinh(", "--kappa2", "1", "--kappa3", "1", "--range", "0:2", "--out", str(tmp_path / "x.csv")]) == 1
    assert "offset 5" in capsys.readouterr().err


def test_usage_errors_exit_2(tmp_path):
    assert main(["synthesize", "--kappa1", "1", "--kappa2", "1", "--range", "2:0", "--kappa3", "1", "--out", "x"]) == 2
    assert main(["synthesize", "--kappa1", "1", "--kappa2", "1", "--range", "0:1", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["synthesize", "--kappa1", "1", "--kappa2", "1", "--kappa3", "1", "--slant", "1", "2", "--range", "0:1", "--out", "x"]) == 2
    assert main([]) == 2


def test_missing_file_exits_2(tmp_path):
    code, doc = _analyze(tmp_path, tmp_path / "missing.csv")
    assert code == 2 and doc is None


def test_bad_schema_exits_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x,y,z,w\n0,0,0,0,0\n")
    assert _analyze(tmp_path, bad)[0] == 2
    bad.write_text("s,x1,x2,x3,x4\n0,0,0,0\n")
    assert _analyze(tmp_path, bad)[0] == 2
    bad.write_text("s,x1,x2,x3,x4\n0,0,0,0,nan\n")
    assert _analyze(tmp_path, bad)[0] == 2


def test_spacelike_segment_exits_1(tmp_path, capsys):
    t = np.linspace(0, 1, 101)
    x1 = np.where(t < 0.5, t, 0.5 + 0.1 * (t - 0.5))
    pts = np.stack([x1, t, 0 * t, 0 * t], axis=1)
    pts[:, 1] = np.where(t < 0.5, 0.2 * t, 0.1 + (t - 0.5))
    path = tmp_path / "space.csv"
    write_curve_csv(path, CurveSamples(t, pts))
    code, doc = _analyze(tmp_path, path)
    assert code == 1
    assert "NotTimelikeError" in capsys.readouterr().err
    assert all(doc[k]["error"] for k in ("frenet", "tangent_helix", "b2_slant", "axis"))


def test_csv_round_trip_is_bit_stable(tmp_path):
    out = tmp_path / "c.csv"
    main(["synthesize", "--kappa1", "1+0.5*sin(s)", "--kappa2", "2", "--kappa3", "exp(s)", "--range", "0:1", "--step", "0.01", "--out", str(out)])
    first = read_curve_csv(out)
    again = tmp_path / "again.csv"
    write_curve_csv(again, first)
    second = read_curve_csv(again)
    np.testing.assert_array_equal(first.s, second.s)
    np.testing.assert_array_equal(first.points, second.points)
    assert out.read_text() == again.read_text()
    code1, doc1 = _analyze(tmp_path, out)
    code2, doc2 = _analyze(tmp_path, again)
    doc1.pop("input"), doc2.pop("input")
    assert code1 == code2 == 0 and doc1 == doc2


def test_frame_command(tmp_path, w_csv):
    out = tmp_path / "frames.csv"
    assert main(["frame", "--input", str(w_csv), "--out", str(out)]) == 0
    data = np.genfromtxt(out, delimiter=",", names=True)
    assert len(data) == 201
    assert np.median(data["kappa1"]) == pytest.approx(np.sqrt(3), abs=1e-5)
    assert main(["frame", "--input", str(tmp_path / "nope.csv"), "--out", str(out)]) == 2


def test_report_to_stdout(w_csv, capsys):
    assert main(["analyze", "--input", str(w_csv)]) == 0
    jsonschema.validate(json.loads(capsys.readouterr().out), REPORT_SCHEMA)


def test_console_script_entry_point(w_csv):
    proc = subprocess.run([sys.executable, "-m", "lorentz_helix.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()

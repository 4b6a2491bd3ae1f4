import json
import math
import subprocess
import sys

import pytest

from shrinkers import cli
from shrinkers.export import read_curve_csv
from shrinkers.integrator import IntegrationError
from shrinkers.model import GeodesicState
from shrinkers.shooting import Near, ShrinkerFamily


def run(tmp_path, *args):
    return cli.main(list(args) + ["--out-dir", str(tmp_path)])


def exit_code(*args):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(args))
    return exc.value.code


def test_integrate_sphere(tmp_path):
    assert run(tmp_path, "integrate", "--n", "2", "--axis-start", "2") == 0
    t = read_curve_csv(str(tmp_path / "curve.csv"))
    assert t.r[-1] < 1e-8 and t.x[-1] == pytest.approx(-2.0, abs=1e-6)
    rec = json.loads((tmp_path / "curve.json").read_text())
    assert rec["init"]["kind"] == "axis" and len(rec["segments"]) == 1


def test_integrate_interior(tmp_path):
    assert run(tmp_path, "integrate", "--n", "2", "--r0", "1.2", "--alpha0", "0",
               "--max-arclength", "80", "--name", "g") == 0
    rec = json.loads((tmp_path / "g.json").read_text())
    t = read_curve_csv(str(tmp_path / "g.csv"))
    assert t.s[0] == pytest.approx(-80.0) and t.s[-1] == pytest.approx(80.0)
    assert len(rec["segments"]) > 5
    assert 0 in [g["index"] for g in rec["segments"]]


def test_argument_errors():
    assert exit_code("integrate", "--axis-start", "2") == 2
    assert exit_code("integrate", "--n", "2", "--axis-start", "2", "--r0", "1") == 2
    assert exit_code("integrate", "--n", "2", "--r0", "1") == 2
    assert exit_code("integrate", "--n", "1", "--axis-start", "2") == 2
    assert exit_code("verify", "--n", "2", "--suite", "nonsense") == 2
    assert exit_code("find", "--n", "2") == 2
    assert exit_code("find", "--n", "2", "--near", "plane", "--count", "0") == 2


def test_integration_failure_exits_1(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise IntegrationError("stuck", GeodesicState(1.0, 0.5, 0.25, 0.0))
    monkeypatch.setattr(cli, "integrate_both", boom)
    assert run(tmp_path, "integrate", "--n", "2", "--axis-start", "1") == 1
    diag = json.loads((tmp_path / "curve.error.json").read_text())
    assert diag["error"] == "stuck" and diag["last_state"]["r"] == 0.25


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SHRINKER_OUT_DIR", str(tmp_path))
    assert cli.main(["integrate", "--n", "3", "--axis-start", "1"]) == 0
    assert (tmp_path / "curve.csv").exists()


def test_find_near_plane(tmp_path):
    assert run(tmp_path, "find", "--n", "2", "--near", "plane", "--count", "2") == 0
    man = json.loads((tmp_path / "family_plane.json").read_text())
    assert man["near"] == "plane"
    assert man["entries"][0]["t_k"] == 2.0
    assert [e["segment_count"] for e in man["entries"]] == [1, 2]
    for e in man["entries"]:
        assert (tmp_path / e["curve_file"]).exists()


def test_find_near_torus_and_torus_itself(tmp_path):
    assert run(tmp_path, "find", "--n", "2", "--near", "torus", "--count", "1") == 0
    man = json.loads((tmp_path / "family_torus.json").read_text())
    assert man["entries"][0]["t_k"] == pytest.approx(math.sqrt(2.0), abs=1e-15)
    assert run(tmp_path, "find", "--n", "2", "--angenent-torus") == 0
    man = json.loads((tmp_path / "angenent_torus.json").read_text())
    assert man["entries"][0]["t_k"] == pytest.approx(0.437123967096806, abs=1e-9)
    assert man["entries"][0]["closure_defect"] < 1e-6


def test_find_bracket_failure_truncates(tmp_path, monkeypatch):
    def partial(config, settings, near, count, resolution):
        return ShrinkerFamily(near, config, (), None, "stopped at k = 0: no bracket")
    monkeypatch.setattr(cli, "build_family", partial)
    assert run(tmp_path, "find", "--n", "2", "--near", "plane", "--count", "3") == 1
    man = json.loads((tmp_path / "family_plane.json").read_text())
    assert man["entries"] == [] and "no bracket" in man["diagnostic"]


def test_render(tmp_path):
    run(tmp_path, "integrate", "--n", "2", "--axis-start", "2")
    csv = str(tmp_path / "curve.csv")
    svg = tmp_path / "a.svg"
    obj = tmp_path / "a.obj"
    assert run(tmp_path, "render", "--n", "2", csv, "--svg", str(svg), "--obj", str(obj),
               "--azimuthal-samples", "8") == 0
    first = (svg.read_bytes(), obj.read_bytes())
    assert run(tmp_path, "render", "--n", "2", csv, "--svg", str(svg), "--obj", str(obj),
               "--azimuthal-samples", "8") == 0
    assert (svg.read_bytes(), obj.read_bytes()) == first
    assert run(tmp_path, "render", "--n", "2", csv) == 0
    assert (tmp_path / "curve.svg").read_bytes() == first[0]
    assert exit_code("render", "--n", "3", csv, "--obj", str(obj)) == 2
    assert exit_code("render", "--n", "2", str(tmp_path / "missing.csv")) == 2


def test_verify(tmp_path):
    assert run(tmp_path, "verify", "--n", "2", "--suite", "legendre") == 0
    reps = json.loads((tmp_path / "verify_legendre.json").read_text())
    assert reps and all(r["passed"] for r in reps)


def test_verify_quarter_spheres_n3(tmp_path):
    assert run(tmp_path, "verify", "--n", "3", "--suite", "quarter-spheres") == 0


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "shrinkers.cli", "integrate", "--n", "2",
                          "--axis-start", "1", "--out-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    out = subprocess.run([sys.executable, "-m", "shrinkers.cli", "verify"],
                         capture_output=True, text=True)
    assert out.returncode == 2 and "--n" in out.stderr

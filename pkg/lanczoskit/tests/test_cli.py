from __future__ import annotations

import json

import numpy as np
import pytest

from lanczoskit import cli, observability
from lanczoskit.cli import main, parse_config, run
from lanczoskit.errors import ConfigError
from lanczoskit.storage import ResultStorage, csv_bytes, format_cell

MINIMAL = """
# square well
[grid]
a = 0
b = 1
n = 40

[potential]
name = zero
"""


@pytest.fixture(autouse=True)
def _reset_metrics() -> None:
    observability.reset()


def _write(tmp_path, text: str):
    path = tmp_path / "run.conf"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert (cfg.grid.a, cfg.grid.b, cfg.grid.n) == (0.0, 1.0, 40)
    assert cfg.potential.name == "zero"
    assert cfg.spectrum.k == 5
    assert cfg.kernel.origin == "discrete-inverse"
    assert cfg.metric.v0 == [0.0, 0.0, 0.0]


def test_lists_and_top_level_keys():
    cfg = parse_config("experiment = geodesic\n[metric]\nv0 = 0, 0.5, 0  # tangential\nM = 2\n"
                       "r0 = 40\n")
    assert cfg.experiment == "geodesic"
    assert cfg.metric.v0 == [0.0, 0.5, 0.0]
    assert cfg.metric.M == 2.0


@pytest.mark.parametrize(("text", "needle"), [
    ("[grid]\nfoo = 1\n", "foo"),
    ("[grid]\nn = 5\nn = 6\n", "duplicate"),
    ("[nowhere]\n", "nowhere"),
    ("[grid\n", "malformed"),
    ("[grid]\njust words\n", "key = value"),
    ("n = 4\n", "top level"),
])
def test_parse_errors_name_the_line(text, needle):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.code == "parse_error"
    assert needle in exc.value.message
    assert exc.value.details["line"] >= 1


def test_validation_errors_name_the_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("[grid]\nn = 2\n")
    assert exc.value.code == "invalid_config"
    assert exc.value.details["key"] == "grid.n"
    assert "3" in exc.value.message

    with pytest.raises(ConfigError) as exc:
        parse_config("[metric]\nr0 = 1.5\n")
    assert "r_min" in exc.value.message


def test_csv_format_is_fixed():
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    assert csv_bytes(("a", "b"), [(1.0, "x")]) == b"a,b\n1,x\n"


def test_storage_manifest(tmp_path):
    storage = ResultStorage(tmp_path / "out")
    artifact = storage.write_table("demo", ("t", "v"), [(0.0, 1.5), (1.0, 2.5)])
    assert artifact.row_count == 2
    assert artifact.path.read_bytes() == b"t,v\n0,1.5\n1,2.5\n"
    manifest = json.loads(storage.write_manifest({"experiment": "demo"}).read_text())
    assert manifest["tables"][0]["sha256"] == artifact.sha256


def test_reciprocity_run_passes(tmp_path, capsys):
    cfg = parse_config(MINIMAL)
    assert run(cfg.model_copy(update={"experiment": "reciprocity"}), tmp_path) == 0
    out = capsys.readouterr().out
    assert "CHECK reciprocity PASS" in out
    assert "bound=1e-08" in out
    header = (tmp_path / "reciprocity.csv").read_text().splitlines()[0]
    assert header == "index,E,mu,product,abs_dev"
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["passed"] is True


def test_pictures_run_writes_one_row_per_time(tmp_path):
    conf = _write(tmp_path, MINIMAL + "[time]\npoints = 20\nobservable = momentum\n")
    assert main(["pictures", "--config", conf, "--out", str(tmp_path / "p")]) == 0
    lines = (tmp_path / "p" / "pictures.csv").read_text().splitlines()
    assert lines[0] == "t,expect_schrodinger,expect_heisenberg,abs_diff"
    assert len(lines) == 21


def test_failed_check_exits_one(tmp_path, capsys):
    conf = _write(tmp_path, MINIMAL + "[kernel]\nbound = 1e-30\n")
    assert main(["reciprocity", "--config", conf, "--out", str(tmp_path / "r")]) == 1
    assert "CHECK reciprocity FAIL" in capsys.readouterr().out


def test_config_errors_exit_two(tmp_path):
    bad_radius = _write(tmp_path, "[metric]\nM = 1\nr0 = 1\n")
    assert main(["geodesic", "--config", bad_radius, "--out", str(tmp_path)]) == 2
    assert main(["spectrum", "--config", str(tmp_path / "missing.conf")]) == 2
    analytic_with_potential = _write(tmp_path, "[potential]\nname = harmonic\n"
                                     "[kernel]\norigin = analytic\n")
    assert main(["kernel", "--config", analytic_with_potential, "--out", str(tmp_path)]) == 2


def test_numerical_errors_exit_three(tmp_path):
    falling = _write(tmp_path, "[metric]\nM = 1\nr0 = 3.2\nhorizon = 50\nsteps = 500\n")
    assert main(["geodesic", "--config", falling, "--out", str(tmp_path)]) == 3


def test_unwritable_output_exits_two(tmp_path, capsys):
    blocker = tmp_path / "taken"
    blocker.write_text("not a directory", encoding="utf-8")
    assert main(["poisson", "--out", str(blocker)]) == 2
    assert "--out" in capsys.readouterr().err


def test_lapack_failure_exits_three(tmp_path, monkeypatch, capsys):
    def broken(cfg, storage):
        raise np.linalg.LinAlgError("eigenvalue iteration did not converge")

    monkeypatch.setitem(cli.RUNNERS, "poisson", broken)
    assert main(["poisson", "--out", str(tmp_path)]) == 3
    assert "linalg_failure" in capsys.readouterr().err


def test_harmonic_on_narrow_interval_has_no_reference(tmp_path, capsys):
    conf = _write(tmp_path, "[potential]\nname = harmonic\n")
    assert main(["spectrum", "--config", conf, "--out", str(tmp_path / "s")]) == 0
    out = capsys.readouterr().out
    assert "spectrum-reference" not in out
    assert "CHECK spectrum-positive PASS" in out


def test_nonstatic_start_needs_flag(tmp_path):
    conf = _write(tmp_path, "[metric]\nv0 = 0, 0.01, 0\nhorizon = 2\nsteps = 20\n")
    assert main(["geodesic", "--config", conf, "--out", str(tmp_path / "a")]) == 2
    assert main(["geodesic", "--config", conf, "--out", str(tmp_path / "b"),
                 "--allow-nonstatic"]) == 0


def test_geodesic_and_poisson_runs(tmp_path):
    conf = _write(tmp_path, "[metric]\nhorizon = 10\nsteps = 200\n")
    assert main(["geodesic", "--config", conf, "--out", str(tmp_path / "g")]) == 0
    header = (tmp_path / "g" / "trajectory_lanczos.csv").read_text().splitlines()[0]
    assert header == "x4,x,y,z,vx,vy,vz,law,mass_tag"
    assert (tmp_path / "g" / "divergence.csv").exists()
    thresholds = (tmp_path / "g" / "divergence_thresholds.csv").read_text().splitlines()
    assert thresholds[0] == "threshold,first_x4"
    assert [float(line.split(",")[0]) for line in thresholds[1:]] == [1e-8, 1e-6, 1e-4]
    assert main(["poisson", "--out", str(tmp_path / "q")]) == 0
    header = (tmp_path / "q" / "poisson.csv").read_text().splitlines()[0]
    assert header == "r,phi,dphi_dr,phi_exact,abs_err"


def test_same_config_same_bytes(tmp_path):
    conf = _write(tmp_path, MINIMAL + "[spectrum]\nk = 4\nrel_tol = 0.02\n")
    for name in ("one", "two"):
        assert main(["spectrum", "--config", conf, "--out", str(tmp_path / name)]) == 0
        assert main(["kernel", "--config", conf, "--out", str(tmp_path / name)]) == 0
    for table in ("spectrum.csv", "kernel_spectrum.csv", "manifest.json"):
        assert (tmp_path / "one" / table).read_bytes() == (tmp_path / "two" / table).read_bytes()

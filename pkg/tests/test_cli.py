"""CLI: artifacts round-trip, determinism, and error reporting."""

from __future__ import annotations

import json

import numpy as np
import pytest

from curvelab import curve as cv
from curvelab import generators as gen
from curvelab.cli import main


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_analyze_round_trip_bitwise(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, out, _ = run_cli(capsys, "gen", "circle", "--n", "256", "--out", str(path))
    assert code == 0
    code, out, _ = run_cli(capsys, "analyze", str(path))
    assert code == 0
    data = json.loads(out)
    reference = gen.circle(256)
    assert data["total_curvature"] == cv.total_curvature(reference)
    assert data["length"] == cv.arclength(reference)
    assert abs(data["total_curvature"] - 2 * np.pi) < 1e-4
    assert data["fenchel_holds"] is True


def test_gen_every_generator(tmp_path, capsys):
    specs = [
        ("circle", []),
        ("convex-polygon", ["--n", "6"]),
        ("doubled-circle", ["--n", "64", "--eps", "0.05"]),
        ("moebius-boundary", ["--n", "12", "--tilt", "0.1", "--sep", "0.01"]),
        ("torus-knot", ["--p", "2", "--q", "3", "--n", "128"]),
        ("random-trig", ["--seed", "4", "--n", "64"]),
    ]
    for name, extra in specs:
        path = tmp_path / f"{name}.json"
        code, _, err = run_cli(capsys, "gen", name, *extra, "--out", str(path))
        assert code == 0, (name, err)
        assert cv.load_curve(path).n_vertices > 0


def test_gen_circle_pair(tmp_path, capsys):
    base = tmp_path / "pair.json"
    code, out, _ = run_cli(
        capsys, "gen", "circle-pair", "--n", "32", "--gap", "0.5", "--out", str(base)
    )
    assert code == 0
    written = json.loads(out)["written"]
    assert len(written) == 2
    for w in written:
        assert cv.load_curve(w).closed


def test_estimate_deterministic(tmp_path, capsys):
    path = tmp_path / "c.json"
    run_cli(capsys, "gen", "circle", "--n", "128", "--out", str(path))
    code, out1, _ = run_cli(
        capsys, "estimate", str(path), "--estimator", "milnor", "--dirs", "5000",
        "--seed", "7",
    )
    assert code == 0
    _, out2, _ = run_cli(
        capsys, "estimate", str(path), "--estimator", "milnor", "--dirs", "5000",
        "--seed", "7",
    )
    assert out1 == out2
    rep = json.loads(out1)
    assert set(rep) == {"mean", "std_error", "count", "seed", "rejected"}


def test_estimate_crofton_needs_point(tmp_path, capsys):
    path = tmp_path / "c.json"
    run_cli(capsys, "gen", "circle", "--out", str(path))
    code, _, err = run_cli(capsys, "estimate", str(path), "--estimator", "crofton")
    assert code == 1
    assert json.loads(err)["error"] == "ValueError"


def test_project_outputs(tmp_path, capsys):
    path = tmp_path / "c.json"
    run_cli(capsys, "gen", "circle", "--n", "64", "--out", str(path))
    csv = tmp_path / "arcs.csv"
    code, out, _ = run_cli(
        capsys, "project", str(path), "--point", "0,0,0", "--csv", str(csv)
    )
    assert code == 0
    data = json.loads(out)
    assert data["spherical_length"] == pytest.approx(2 * np.pi, abs=1e-9)
    assert data["cone_density"]["slack"] == pytest.approx(0.0, abs=1e-9)
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "arc_index,arc_length"
    assert len(lines) == 65


def test_plateau_and_monotonicity_pipeline(tmp_path, capsys):
    cpath = tmp_path / "c.json"
    run_cli(capsys, "gen", "circle", "--n", "64", "--out", str(cpath))
    mpath = tmp_path / "m.obj"
    code, out, _ = run_cli(
        capsys, "plateau", str(cpath), "--topology", "disk", "--resolution", "8",
        "--out", str(mpath),
    )
    assert code == 0
    assert json.loads(out)["area"] == pytest.approx(np.pi, rel=0.01)
    prof = tmp_path / "prof.csv"
    code, _, err = run_cli(
        capsys, "monotonicity", str(mpath), "--point", "0,0,0.2",
        "--radii", "geometric:0.1:20:20", "--out", str(prof),
    )
    assert code == 0
    verdict = json.loads(err)
    assert verdict["holds"] is True
    rows = prof.read_text().strip().splitlines()
    assert rows[0] == "r,theta_surface,theta_cone,theta_total"
    assert len(rows) == 21


def test_report_on_fixture_directory(tmp_path, capsys):
    fixtures = tmp_path / "fixtures"
    fixtures.mkdir()
    run_cli(capsys, "gen", "circle", "--n", "48", "--out", str(fixtures / "circle.json"))
    run_cli(
        capsys, "gen", "moebius-boundary", "--n", "12", "--tilt", "0.1", "--sep",
        "0.01", "--out", str(fixtures / "moebius.json"),
    )
    run_cli(
        capsys, "plateau", str(fixtures / "circle.json"), "--topology", "disk",
        "--resolution", "6", "--out", str(fixtures / "disk.obj"),
    )
    out_path = tmp_path / "report.json"
    code, _, _ = run_cli(
        capsys, "report", "--all", str(fixtures), "--viewpoints", "20",
        "--out", str(out_path), "--threads", "2",
    )
    assert code == 0
    report = json.loads(out_path.read_text())
    assert report["all_hold"] is True
    assert len(report["fixtures"]) == 3
    per_file = report["fixtures"][str(fixtures / "circle.json")]
    assert per_file["projection_bound"]["holds"] is True
    assert per_file["unknotted_certificate"]["context"]["certified"] is True


def test_report_flags_failures(tmp_path, capsys):
    import curvelab.plateau as pl

    from conftest import folded_strip_mesh

    fixtures = tmp_path / "fixtures"
    fixtures.mkdir()
    pl.save_mesh(folded_strip_mesh(), fixtures / "folded.obj")
    code, out, _ = run_cli(capsys, "report", "--all", str(fixtures))
    assert code == 1
    assert json.loads(out)["all_hold"] is False


def test_missing_file_error_json(capsys):
    code, _, err = run_cli(capsys, "analyze", "/nonexistent/nope.json")
    assert code == 1
    payload = json.loads(err)
    assert "error" in payload and "message" in payload


def test_bad_radii_spec(tmp_path, capsys):
    cpath = tmp_path / "c.json"
    run_cli(capsys, "gen", "circle", "--n", "32", "--out", str(cpath))
    mpath = tmp_path / "m.obj"
    run_cli(capsys, "plateau", str(cpath), "--resolution", "6", "--out", str(mpath))
    code, _, err = run_cli(
        capsys, "monotonicity", str(mpath), "--point", "0,0,0", "--radii", "linear:1:2:3"
    )
    assert code == 1
    assert json.loads(err)["error"] == "ValueError"
"""Command-line front end: generate, analyze, project, estimate, solve,
profile, report.

Every randomized command takes --seed (default 0, never wall clock), so
identical invocations produce identical artifacts. Errors leave as JSON on
stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import curve as cv
from . import diagnostics as dg
from . import generators as gen
from . import intgeom as ig
from . import projcone as pj
from . import plateau as pl
from .errors import CurveLabError


def _parse_point(text: str) -> np.ndarray:
    return np.asarray([float(x) for x in text.split(",")], dtype=np.float64)


def _parse_radii(text: str) -> np.ndarray:
    kind, *rest = text.split(":")
    if kind != "geometric" or len(rest) != 3:
        raise ValueError("radii spec must look like geometric:rmin:rmax:count")
    rmin, rmax, count = float(rest[0]), float(rest[1]), int(rest[2])
    if rmin <= 0 or rmax <= rmin or count < 2:
        raise ValueError("need 0 < rmin < rmax and count >= 2")
    return np.geomspace(rmin, rmax, count)


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# -- gen ---------------------------------------------------------------------


def _cmd_gen(args) -> int:
    name = args.generator
    if name == "circle":
        out = gen.circle(args.n, radius=args.radius)
    elif name == "convex-polygon":
        radii = [float(x) for x in args.radii.split(",")] if args.radii else None
        out = gen.convex_polygon(args.n, radii)
    elif name == "doubled-circle":
        out = gen.doubled_circle(args.n, args.eps)
    elif name == "moebius-boundary":
        out = gen.moebius_boundary(args.n, args.tilt, args.sep)
    elif name == "torus-knot":
        out = gen.torus_knot(args.p, args.q, args.n)
    elif name == "random-trig":
        out = gen.random_trig_curve(
            args.seed, harmonics=args.harmonics, amplitude=args.amplitude, n=args.n
        )
    elif name == "circle-pair":
        c1, c2 = gen.circle_pair(args.radius, args.radius2, args.gap, n=args.n)
        base = Path(args.out)
        p1 = base.with_suffix(".1.json")
        p2 = base.with_suffix(".2.json")
        cv.save_curve(c1, p1)
        cv.save_curve(c2, p2)
        _emit({"written": [str(p1), str(p2)]}, None)
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown generator {name}")
    cv.save_curve(out, args.out)
    _emit({"written": args.out, "n_vertices": out.n_vertices}, None)
    return 0


def _cmd_analyze(args) -> int:
    c = cv.load_curve(args.curve)
    data = {
        "n_vertices": c.n_vertices,
        "dim": c.dim,
        "closed": c.closed,
        "total_curvature": cv.total_curvature(c),
        "length": cv.arclength(c),
        "diameter": cv.diameter(c),
    }
    if c.closed:
        data["rectifiability_ratio"] = cv.rectifiability_ratio(c)
        data["fenchel_holds"] = dg.fenchel_screen(c).holds
        data["unknotted_certificate"] = dg.unknotted_certificate(c)
    _emit(data, args.out)
    return 0


def _cmd_project(args) -> int:
    c = cv.load_curve(args.curve)
    p = _parse_point(args.point)
    sp = pj.radial_project(c, p)
    data: dict = {
        "center": p.tolist(),
        "points": sp.points.tolist(),
        "arc_lengths": sp.arc_lengths.tolist(),
        "spherical_length": sp.total_length,
        "closed": sp.closed,
    }
    if c.closed:
        rep = pj.cone_density(c, p)
        data["cone_density"] = {
            "spherical_length": rep.spherical_length,
            "density": rep.density,
            "bound_tc": rep.bound_tc,
            "slack": rep.slack,
        }
    else:
        rep = pj.open_curve_cone_bound(c, p)
        data["open_curve_bound"] = {
            "density": rep.density,
            "bound": rep.bound,
            "slack": rep.slack,
        }
    if args.csv:
        lines = ["arc_index,arc_length"]
        lines += [f"{i},{float(a)!r}" for i, a in enumerate(sp.arc_lengths)]
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(data, args.out)
    return 0


def _cmd_estimate(args) -> int:
    c = cv.load_curve(args.curve)
    if args.estimator == "milnor":
        rep = ig.milnor_total_curvature(c, args.dirs, args.seed)
    else:
        if args.point is None:
            raise ValueError("crofton estimator needs --point")
        rep = ig.crofton_projected_length(c, _parse_point(args.point), args.dirs, args.seed)
    _emit(rep.to_json_dict(), args.out)
    return 0


def _cmd_plateau(args) -> int:
    curves = [cv.load_curve(args.curve)]
    if args.curve2:
        curves.append(cv.load_curve(args.curve2))
    mesh = pl.build_initial_mesh(
        curves if len(curves) > 1 else curves[0], args.topology, args.resolution
    )
    params = pl.SolverParams(
        max_iters=args.max_iters,
        grad_tol=args.grad_tol,
        seed=args.seed,
    )
    solved, report = pl.minimize_area(mesh, params)
    pl.save_mesh(solved, args.out)
    data = report.to_json_dict()
    data["written"] = args.out
    _emit(data, args.report)
    return 0


def _cmd_monotonicity(args) -> int:
    mesh = pl.load_mesh(args.mesh)
    p = _parse_point(args.point)
    radii = _parse_radii(args.radii)
    profile = pl.extended_density_profile(mesh, p, radii)
    lines = ["r,theta_surface,theta_cone,theta_total"]
    for k in range(len(radii)):
        lines.append(
            f"{float(profile.radii[k])!r},{float(profile.theta_surface[k])!r},"
            f"{float(profile.theta_cone[k])!r},{float(profile.theta_total[k])!r}"
        )
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        print("\n".join(lines))
    verdict = dg.verify_monotonicity(profile, tol=args.tol)
    print(json.dumps(verdict.to_json_dict()), file=sys.stderr)
    return 0 if verdict.holds else 1


# -- report ------------------------------------------------------------------


def _sample_viewpoints(c: cv.PolylineCurve, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    lo = np.min(c.vertices, axis=0)
    hi = np.max(c.vertices, axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pts = []
    tol = 1e-6 * cv.diameter(c)
    starts = c.vertices if c.closed else c.vertices[:-1]
    ends = np.roll(c.vertices, -1, axis=0) if c.closed else c.vertices[1:]
    while len(pts) < count:
        p = lo - 0.5 * span + 2.0 * span * rng.random(c.dim)
        from .vecmath import point_segment_distance

        if np.min(point_segment_distance(p, starts, ends)) > tol:
            pts.append(p)
    return np.asarray(pts)


def _report_curve(path: Path, viewpoints: int, seed: int) -> dict:
    c = cv.load_curve(path)
    verdicts = {}
    if c.closed:
        verdicts["fenchel_lower_bound"] = dg.fenchel_screen(c).to_json_dict()
        worst = None
        for p in _sample_viewpoints(c, viewpoints, seed):
            v = dg.verify_projection_bound(c, p)
            if worst is None or v.slack < worst.slack:
                worst = v
        verdicts["projection_bound"] = worst.to_json_dict()
        cert = dg.unknotted_certificate(c)
        verdicts["unknotted_certificate"] = {
            "theorem_id": "unknotted_certificate",
            "holds": True,  # informational: never a failure
            "slack": 0.0,
            "tolerance": 0.0,
            "context": cert,
        }
        vb = min(
            (dg.verify_boundary_projection_bound(c, i) for i in range(c.n_vertices)),
            key=lambda v: v.slack,
        )
        verdicts["boundary_projection_bound"] = vb.to_json_dict()
    else:
        worst = None
        for p in _sample_viewpoints(c, viewpoints, seed):
            v = dg.verify_open_curve_bound(c, p)
            if worst is None or v.slack < worst.slack:
                worst = v
        verdicts["open_curve_cone_bound"] = worst.to_json_dict()
    return verdicts


def _report_mesh(path: Path) -> dict:
    mesh = pl.load_mesh(path)
    verdicts = {"embeddedness": dg.verify_embedded(mesh).to_json_dict()}
    p = np.mean(mesh.vertices, axis=0)
    scale = mesh.scale
    radii = np.geomspace(0.05 * scale, 20.0 * scale, 32)
    profile = pl.extended_density_profile(mesh, p, radii)
    verdicts["extended_monotonicity"] = dg.verify_monotonicity(profile).to_json_dict()
    interior = np.nonzero(~mesh.boundary_vertex_mask())[0]
    if len(interior):
        densities = [pl.vertex_density(mesh, i) for i in interior]
        extremal = interior[int(np.argmax(densities))]
        verdicts["density_cone_bound"] = dg.verify_density_cone_bound(
            mesh, mesh.boundary_curves, int(extremal)
        ).to_json_dict()
    return verdicts


def _cmd_report(args) -> int:
    root = Path(args.all)
    if not root.is_dir():
        raise ValueError(f"{root} is not a directory")
    curve_files = sorted(root.glob("*.json"))
    curve_files = [p for p in curve_files if not p.name.endswith(".obj.json")]
    mesh_files = sorted(root.glob("*.obj"))

    results: dict = {}
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        curve_futs = {
            str(p): pool.submit(_report_curve, p, args.viewpoints, args.seed)
            for p in curve_files
        }
        mesh_futs = {str(p): pool.submit(_report_mesh, p) for p in mesh_files}
        for key, fut in {**curve_futs, **mesh_futs}.items():
            results[key] = fut.result()

    all_hold = all(
        v["holds"] for per_file in results.values() for v in per_file.values()
    )
    _emit({"all_hold": all_hold, "fixtures": results}, args.out)
    return 0 if all_hold else 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvelab",
        description="Polygonal curves, projections, and discrete minimal surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a fixture curve")
    p_gen.add_argument(
        "generator",
        choices=[
            "circle",
            "convex-polygon",
            "doubled-circle",
            "moebius-boundary",
            "torus-knot",
            "random-trig",
            "circle-pair",
        ],
    )
    p_gen.add_argument("--n", type=int, default=128)
    p_gen.add_argument("--radius", type=float, default=1.0)
    p_gen.add_argument("--radius2", type=float, default=1.0)
    p_gen.add_argument("--gap", type=float, default=0.5)
    p_gen.add_argument("--radii", type=str, default=None, help="comma-separated radii")
    p_gen.add_argument("--eps", type=float, default=0.05)
    p_gen.add_argument("--tilt", type=float, default=0.1)
    p_gen.add_argument("--sep", type=float, default=0.01)
    p_gen.add_argument("--p", type=int, default=2)
    p_gen.add_argument("--q", type=int, default=3)
    p_gen.add_argument("--harmonics", type=int, default=3)
    p_gen.add_argument("--amplitude", type=float, default=1.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_an = sub.add_parser("analyze", help="curve invariants as JSON")
    p_an.add_argument("curve")
    p_an.add_argument("--out", default=None)
    p_an.set_defaults(func=_cmd_analyze)

    p_pr = sub.add_parser("project", help="radial projection about a point")
    p_pr.add_argument("curve")
    p_pr.add_argument("--point", required=True, help="x,y,z")
    p_pr.add_argument("--out", default=None)
    p_pr.add_argument("--csv", default=None, help="write per-arc lengths as CSV")
    p_pr.set_defaults(func=_cmd_project)

    p_es = sub.add_parser("estimate", help="Monte-Carlo estimators")
    p_es.add_argument("curve")
    p_es.add_argument("--estimator", choices=["milnor", "crofton"], required=True)
    p_es.add_argument("--dirs", type=int, default=100000)
    p_es.add_argument("--seed", type=int, default=0)
    p_es.add_argument("--point", default=None, help="x,y,z (crofton)")
    p_es.add_argument("--out", default=None)
    p_es.set_defaults(func=_cmd_estimate)

    p_pl = sub.add_parser("plateau", help="solve the discrete Plateau problem")
    p_pl.add_argument("curve")
    p_pl.add_argument("--curve2", default=None, help="second loop for annulus")
    p_pl.add_argument("--topology", choices=["disk", "annulus", "moebius"], default="disk")
    p_pl.add_argument("--resolution", type=int, default=32)
    p_pl.add_argument("--max-iters", type=int, default=2000)
    p_pl.add_argument("--grad-tol", type=float, default=1e-6)
    p_pl.add_argument("--seed", type=int, default=0)
    p_pl.add_argument("--out", required=True, help="OBJ output path")
    p_pl.add_argument("--report", default=None, help="convergence report JSON path")
    p_pl.set_defaults(func=_cmd_plateau)

    p_mo = sub.add_parser("monotonicity", help="extended density profile")
    p_mo.add_argument("mesh", help="OBJ written by the plateau command")
    p_mo.add_argument("--point", required=True, help="x,y,z")
    p_mo.add_argument("--radii", required=True, help="geometric:rmin:rmax:count")
    p_mo.add_argument("--tol", type=float, default=5e-3)
    p_mo.add_argument("--out", default=None, help="CSV output path")
    p_mo.set_defaults(func=_cmd_monotonicity)

    p_re = sub.add_parser("report", help="aggregate theorem verdicts over fixtures")
    p_re.add_argument("--all", required=True, help="fixtures directory")
    p_re.add_argument("--out", default=None)
    p_re.add_argument("--seed", type=int, default=0)
    p_re.add_argument("--viewpoints", type=int, default=100)
    p_re.add_argument("--threads", type=int, default=1)
    p_re.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CurveLabError, ValueError, OSError, KeyError) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Theorem-level verdicts tying the other modules together.

Each check returns a TheoremVerdict whose `holds` flag is exactly
`slack >= -tolerance`, so a report is reproducible from its numbers.
Polyline inequalities get the tight default tolerance; mesh-discretization
claims get the loose one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curve as cv
from . import projcone as pj
from .curve import PolylineCurve
from .plateau import (
    DensityProfile,
    TriangleMesh,
    self_intersection_report,
    vertex_density,
)

EXACT_TOL = 1e-9  # polyline arithmetic
MESH_TOL = 5e-3  # discretization-limited claims

FOUR_PI = 4.0 * np.pi
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TheoremVerdict:
    theorem_id: str
    holds: bool
    slack: float
    tolerance: float
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.holds != (self.slack >= -self.tolerance):
            raise ValueError("holds flag must equal slack >= -tolerance")

    def to_json_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "holds": self.holds,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "context": self.context,
        }


def _verdict(theorem_id: str, slack: float, tol: float, **context) -> TheoremVerdict:
    return TheoremVerdict(
        theorem_id=theorem_id,
        holds=bool(slack >= -tol),
        slack=float(slack),
        tolerance=tol,
        context=context,
    )


def verify_projection_bound(curve: PolylineCurve, p, tol: float = EXACT_TOL) -> TheoremVerdict:
    """Projected length about p never exceeds total curvature."""
    rep = pj.cone_density(curve, p)
    return _verdict(
        "projection_bound",
        rep.slack,
        tol,
        spherical_length=rep.spherical_length,
        total_curvature=rep.bound_tc,
        density=rep.density,
        coplanarity_residual=pj.coplanarity_residual(curve, p),
        locally_convex_hint=pj.local_convexity_flag(curve, p),
    )


def verify_boundary_projection_bound(
    curve: PolylineCurve, vertex_index: int, tol: float = EXACT_TOL
) -> TheoremVerdict:
    """Vertex-based projection bound with the pi + theta correction."""
    rep = pj.boundary_projection_bound(curve, vertex_index)
    return _verdict(
        "boundary_projection_bound",
        rep.slack,
        tol,
        length=rep.length,
        total_curvature=rep.tc,
        exterior_angle=rep.theta,
        vertex=vertex_index,
    )


def verify_open_curve_bound(curve: PolylineCurve, p, tol: float = EXACT_TOL) -> TheoremVerdict:
    """Cone density of a nonclosed curve against (TC + pi) / (2 pi)."""
    rep = pj.open_curve_cone_bound(curve, p)
    return _verdict(
        "open_curve_cone_bound",
        rep.slack,
        tol,
        density=rep.density,
        bound=rep.bound,
        total_curvature=rep.tc,
    )


def verify_density_cone_bound(
    mesh: TriangleMesh,
    curves: PolylineCurve | list[PolylineCurve],
    vertex_index: int,
    tol: float = MESH_TOL,
) -> TheoremVerdict:
    """Surface density at an interior mesh vertex stays below the cone
    density of the boundary seen from that vertex.

    The discrete surface density is the incident-angle sum; the cone
    density sums the projected lengths of all boundary loops.
    """
    if isinstance(curves, PolylineCurve):
        curves = [curves]
    if mesh.boundary_vertex_mask()[vertex_index]:
        raise ValueError("density-vs-cone verdict applies to interior vertices")
    p = mesh.vertices[vertex_index]
    surf = vertex_density(mesh, vertex_index)
    length = sum(pj.spherical_length(pj.radial_project(c, p)) for c in curves)
    cone = length / TWO_PI
    return _verdict(
        "density_cone_bound",
        cone - surf,
        tol,
        vertex_density=surf,
        cone_density=cone,
        vertex=int(vertex_index),
    )


def verify_monotonicity(profile: DensityProfile, tol: float = MESH_TOL) -> TheoremVerdict:
    """Extended density profile is nondecreasing in the radius."""
    slack = profile.min_successive_difference()
    return _verdict(
        "extended_monotonicity",
        slack,
        tol,
        radii=[float(profile.radii[0]), float(profile.radii[-1])],
        samples=len(profile.radii),
        theta_first=float(profile.theta_total[0]),
        theta_last=float(profile.theta_total[-1]),
    )


def verify_corner_density(
    mesh: TriangleMesh,
    curve: PolylineCurve,
    vertex_index: int,
    tol: float = MESH_TOL,
    planarity_tol: float = 1e-6,
) -> TheoremVerdict:
    """Boundary vertex density sits at 1/2 - theta/2pi or 1/2 + theta/2pi.

    At a cusp (theta = pi) only zero remains unless the boundary curve is
    planar. Slack is minus the distance to the nearest admissible value.
    """
    loop = None
    for candidate, c in zip(mesh.boundary_loops, mesh.boundary_curves):
        if c is curve or np.array_equal(c.vertices, curve.vertices):
            loop = candidate
            break
    if loop is None:
        raise ValueError("curve is not a boundary loop of this mesh")
    curve_pos = vertex_index
    mesh_vertex = loop[curve_pos]
    theta = cv.exterior_angle(curve, curve_pos)
    d = vertex_density(mesh, mesh_vertex)
    lo = 0.5 - theta / TWO_PI
    hi = 0.5 + theta / TWO_PI
    planar = _curve_planarity_residual(curve) < planarity_tol
    if abs(theta - np.pi) <= tol and not planar:
        candidates = [0.0]
    else:
        candidates = [lo, hi]
    dist = min(abs(d - c) for c in candidates)
    return _verdict(
        "corner_density",
        -dist,
        tol,
        vertex_density=d,
        exterior_angle=theta,
        candidates=candidates,
        planar_boundary=bool(planar),
    )


def _curve_planarity_residual(curve: PolylineCurve) -> float:
    w = curve.vertices - np.mean(curve.vertices, axis=0)
    if curve.dim == 2:
        return 0.0
    s = np.linalg.svd(w, compute_uv=False)
    if len(s) < 3 or s[0] == 0.0:
        return 0.0
    return float(s[2] / s[0])


def verify_embedded(mesh: TriangleMesh, tol: float = 0.0) -> TheoremVerdict:
    """No self-intersections among non-adjacent triangle pairs."""
    rep = self_intersection_report(mesh)
    if rep.intersecting_pairs:
        slack = -1.0 - float(len(rep.intersecting_pairs))
    else:
        slack = rep.min_separation
    return _verdict(
        "embeddedness",
        slack,
        tol,
        intersecting_pairs=len(rep.intersecting_pairs),
        min_separation=rep.min_separation,
    )


def unknotted_certificate(curve: PolylineCurve) -> dict:
    """Sound, incomplete unknottedness certificate from total curvature.

    Certifies when TC <= 4 pi; anything else is inconclusive (never a
    claim of knottedness).
    """
    tc = cv.total_curvature(curve)
    return {"certified": bool(tc <= FOUR_PI + EXACT_TOL), "tc": tc}


def fenchel_screen(
    curves: PolylineCurve | list[PolylineCurve], tol: float = EXACT_TOL
) -> TheoremVerdict:
    """Every closed component carries total curvature at least 2 pi.

    For multi-component input with combined total curvature at most 4 pi,
    the two-plane-convex-components consequence is reported in context,
    informationally.
    """
    if isinstance(curves, PolylineCurve):
        curves = [curves]
    tcs = [cv.total_curvature(c) for c in curves if c.closed]
    if not tcs:
        raise ValueError("fenchel screening needs at least one closed component")
    slack = min(tc - TWO_PI for tc in tcs)
    context: dict = {"component_tcs": tcs, "components": len(tcs)}
    if len(tcs) > 1 and sum(tcs) <= FOUR_PI + tol:
        context["note"] = (
            "combined TC <= 4*pi: exactly two components, each planar convex,"
            " is the only admissible configuration"
        )
        context["planarity_residuals"] = [
            _curve_planarity_residual(c) for c in curves if c.closed
        ]
    return _verdict("fenchel_lower_bound", slack, tol, **context)

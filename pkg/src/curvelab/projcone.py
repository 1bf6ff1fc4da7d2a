"""Radial projection to the unit sphere, cone densities, and cone areas.

Straight edges project to great-circle arcs, so projected lengths are
exact angle sums, never sampled. Cone areas in a ball are per-segment
polar integrals in the plane spanned by the viewpoint and the segment;
the integrand is smooth except at the ball-clipping kink, which the
adaptive quadrature resolves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import curve as cv
from .curve import PolylineCurve
from .errors import ProjectionUndefinedError
from .vecmath import point_segment_distance, unit, vector_angle

QUAD_REL_TOL = 1e-8


@dataclass(frozen=True)
class SphericalPolyline:
    """Projected curve: unit vectors about `center` with exact arc lengths."""

    center: np.ndarray
    points: np.ndarray
    arc_lengths: np.ndarray
    closed: bool

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        arcs = np.asarray(self.arc_lengths, dtype=np.float64)
        if np.any(np.abs(np.linalg.norm(pts, axis=1) - 1.0) > 1e-12):
            raise ValueError("projected points must be unit vectors")
        expected = len(pts) if self.closed else len(pts) - 1
        if len(arcs) != expected:
            raise ValueError("arc count does not match point count")
        nxt = np.roll(pts, -1, axis=0) if self.closed else pts[1:]
        ref = np.asarray(vector_angle(pts if self.closed else pts[:-1], nxt))
        if np.any(np.abs(ref - arcs) > 1e-12):
            raise ValueError("stored arc lengths disagree with point angles")

    @property
    def total_length(self) -> float:
        return float(np.sum(self.arc_lengths))


@dataclass(frozen=True)
class ConeDensityReport:
    spherical_length: float
    density: float
    bound_tc: float
    slack: float


@dataclass(frozen=True)
class BoundaryProjectionReport:
    length: float
    tc: float
    theta: float
    slack: float


@dataclass(frozen=True)
class OpenConeBoundReport:
    spherical_length: float
    density: float
    tc: float
    bound: float
    slack: float


def _segment_endpoints(curve: PolylineCurve) -> tuple[np.ndarray, np.ndarray]:
    v = curve.vertices
    if curve.closed:
        return v, np.roll(v, -1, axis=0)
    return v[:-1], v[1:]


def _require_off_curve(curve: PolylineCurve, p: np.ndarray) -> None:
    a, b = _segment_endpoints(curve)
    tol = 1e-12 * max(cv.diameter(curve), 1e-300)
    if np.min(point_segment_distance(p, a, b)) <= tol:
        raise ProjectionUndefinedError("projection center lies on the curve")


def radial_project(curve: PolylineCurve, p) -> SphericalPolyline:
    """Project the curve onto the unit sphere about p (stored at the origin)."""
    p = np.asarray(p, dtype=np.float64)
    _require_off_curve(curve, p)
    w = curve.vertices - p
    pts = unit(w)
    nxt = np.roll(w, -1, axis=0) if curve.closed else w[1:]
    cur = w if curve.closed else w[:-1]
    arcs = np.asarray(vector_angle(cur, nxt), dtype=np.float64)
    return SphericalPolyline(center=p, points=pts, arc_lengths=arcs, closed=curve.closed)


def spherical_length(sp: SphericalPolyline) -> float:
    return sp.total_length


def cone_density(curve: PolylineCurve, p) -> ConeDensityReport:
    """Density at p of the cone over a closed curve, with its curvature bound."""
    if not curve.closed:
        raise ValueError("cone density bound applies to closed curves; see open_curve_cone_bound")
    length = spherical_length(radial_project(curve, p))
    tc = cv.total_curvature(curve)
    return ConeDensityReport(
        spherical_length=length,
        density=length / (2.0 * np.pi),
        bound_tc=tc,
        slack=tc - length,
    )


def boundary_projection_bound(curve: PolylineCurve, vertex_index: int) -> BoundaryProjectionReport:
    """Projection bound seen from a vertex of the curve itself.

    The two incident edges are radial from the vertex, so each projects to
    a single point (its one-sided tangent direction) and contributes no
    arc; the projected image is the open spherical polyline through all
    other vertices.
    """
    if not curve.closed:
        raise ValueError("close the curve first; the vertex bound assumes a closed curve")
    n = curve.n_vertices
    i = vertex_index
    if not 0 <= i < n:
        raise IndexError(f"vertex index {i} out of range")
    p = curve.vertices[i]
    order = [(i + k) % n for k in range(1, n)]
    w = curve.vertices[order] - p
    arcs = np.asarray(vector_angle(w[:-1], w[1:]), dtype=np.float64)
    length = float(np.sum(arcs))
    tc = cv.total_curvature(curve)
    theta = cv.exterior_angle(curve, i)
    return BoundaryProjectionReport(
        length=length, tc=tc, theta=theta, slack=tc - np.pi - theta - length
    )


def open_curve_cone_bound(curve: PolylineCurve, p) -> OpenConeBoundReport:
    """Cone density of a nonclosed curve against (TC + pi) / (2 pi)."""
    if curve.closed:
        raise ValueError("curve is closed; use cone_density")
    length = spherical_length(radial_project(curve, p))
    tc = cv.total_curvature(curve)
    density = length / (2.0 * np.pi)
    bound = (tc + np.pi) / (2.0 * np.pi)
    return OpenConeBoundReport(
        spherical_length=length, density=density, tc=tc, bound=bound, slack=bound - density
    )


def coplanarity_residual(curve: PolylineCurve, p) -> float:
    """Relative thickness of curve-plus-viewpoint outside its best 2-plane.

    Zero means the curve lies in a 2-plane through p (the equality case of
    the projection bound). Computed as the third singular value of the
    centered vertex matrix, relative to the first.
    """
    p = np.asarray(p, dtype=np.float64)
    w = curve.vertices - p
    if curve.dim == 2:
        return 0.0
    s = np.linalg.svd(w, compute_uv=False)
    if len(s) < 3 or s[0] == 0.0:
        return 0.0
    return float(s[2] / s[0])


def local_convexity_flag(curve: PolylineCurve, p, tol: float = 1e-6) -> bool:
    """Heuristic discrete check that a planar closed curve is locally convex
    with respect to p: consistent turning sign and p on the concave side of
    every edge. Reported for diagnosis; never asserted."""
    p = np.asarray(p, dtype=np.float64)
    if not curve.closed or coplanarity_residual(curve, p) > tol:
        return False
    w = curve.vertices - p
    # in-plane coordinates from the two dominant right singular vectors
    _, _, vt = np.linalg.svd(w, full_matrices=False)
    xy = w @ vt[:2].T
    e = np.roll(xy, -1, axis=0) - xy
    cross_turn = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
    if np.all(cross_turn >= -tol):
        sign = 1.0
    elif np.all(cross_turn <= tol):
        sign = -1.0
    else:
        return False
    cross_p = e[:, 0] * (-xy[:, 1]) - e[:, 1] * (-xy[:, 0])
    return bool(np.all(sign * cross_p >= -tol))


# ---------------------------------------------------------------------------
# Cone areas inside a ball


def _adaptive_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                      rel_tol: float = QUAD_REL_TOL, max_rounds: int = 48) -> float:
    """Adaptive Simpson on [a, b] with a vectorized integrand.

    Keeps a flat queue of intervals and splits every non-converged one per
    round; per-interval tolerance is the global relative tolerance spread
    proportionally to interval width.
    """
    if b <= a:
        return 0.0
    lo = np.array([a])
    hi = np.array([b])
    flo = f(lo)
    fhi = f(hi)
    fmid = f(0.5 * (lo + hi))
    s = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    done = 0.0
    for _ in range(max_rounds):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        s_left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        s_right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        s2 = s_left + s_right
        err = np.abs(s2 - s)
        total_est = done + float(np.sum(s2))
        budget = rel_tol * max(abs(total_est), 1e-14) * (hi - lo) / (b - a)
        ok = err <= np.maximum(15.0 * budget, 1e-17)
        done += float(np.sum(s2[ok] + (s2[ok] - s[ok]) / 15.0))
        if np.all(ok):
            return done
        keep = ~ok
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        flo = np.concatenate([flo[keep], fmid[keep]])
        fhi = np.concatenate([fmid[keep], fhi[keep]])
        fmid = np.concatenate([flm[keep], frm[keep]])
        s = np.concatenate([s_left[keep], s_right[keep]])
    return done + float(np.sum(s))


def _piecewise_simpson(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breakpoints: list[float],
    rel_tol: float = QUAD_REL_TOL,
) -> float:
    """Adaptive Simpson over [a, b] split at known kink locations."""
    knots = [a] + [t for t in breakpoints if a < t < b] + [b]
    return sum(
        _adaptive_simpson(f, lo, hi, rel_tol) for lo, hi in zip(knots[:-1], knots[1:])
    )


def _segment_polar_frame(a: np.ndarray, b: np.ndarray):
    """In-plane data for the radial graph of segment [a, b] seen from the
    origin: (sweep angle, A2, B2) or None for radial/degenerate segments."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return None
    sweep = float(vector_angle(a, b))
    if sweep < 1e-14 or sweep > np.pi - 1e-12:
        return None
    e1 = a / na
    w = b - np.dot(b, e1) * e1
    nw = np.linalg.norm(w)
    if nw <= 1e-15 * nb:
        return None
    e2 = w / nw
    a2 = np.array([na, 0.0])
    b2 = np.array([np.dot(b, e1), np.dot(b, e2)])
    return sweep, a2, b2


def _segment_rho(a2: np.ndarray, b2: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Radial distance to the chord a2-b2 as a function of ray angle."""
    d = b2 - a2
    num = d[0] * a2[1] - d[1] * a2[0]

    def rho(phi: np.ndarray) -> np.ndarray:
        den = d[0] * np.sin(phi) - d[1] * np.cos(phi)
        return num / den

    return rho


def _clip_angles(a2: np.ndarray, b2: np.ndarray, r: float, sweep: float) -> list[float]:
    """Angles in (0, sweep) where the radial graph crosses the clip radius.

    rho(phi) = r reduces to r (dx sin phi - dy cos phi) = cross(d, a2),
    a single-harmonic equation; the roots mark the integrand's kinks and
    become quadrature breakpoints.
    """
    d = b2 - a2
    num = d[0] * a2[1] - d[1] * a2[0]
    p, q = r * d[0], -r * d[1]
    amp = float(np.hypot(p, q))
    if amp == 0.0:
        return []
    s = num / amp
    if abs(s) > 1.0:
        return []
    psi = np.arctan2(q, p)
    base = np.arcsin(np.clip(s, -1.0, 1.0))
    out = []
    for root in (base, np.pi - base):
        for k in (-1, 0, 1):
            phi = root - psi + 2.0 * np.pi * k
            if 1e-13 < phi < sweep - 1e-13:
                out.append(float(phi))
    return sorted(out)


def exterior_cone_area_in_ball(curve: PolylineCurve, p, r: float) -> float:
    """Area inside B(p, r) of the rays leaving the curve away from p.

    Per segment this is the polar integral of (r^2 - rho^2)/2 over the
    subtended angle, clipped to rho < r. Segments radial from p subtend no
    angle and contribute nothing, so p may lie on the curve.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    p = np.asarray(p, dtype=np.float64)
    starts, ends = _segment_endpoints(curve)
    total = 0.0
    for a, b in zip(starts - p, ends - p):
        frame = _segment_polar_frame(a, b)
        if frame is None:
            continue
        sweep, a2, b2 = frame
        if _min_rho(a2, b2) >= r:
            continue
        rho = _segment_rho(a2, b2)

        def g(phi: np.ndarray) -> np.ndarray:
            rr = rho(phi)
            return 0.5 * np.maximum(0.0, r * r - rr * rr)

        total += _piecewise_simpson(g, 0.0, sweep, _clip_angles(a2, b2, r, sweep))
    return total


def cone_area_in_ball(curve: PolylineCurve, p, r: float) -> float:
    """Area inside B(p, r) of the cone from p over the curve.

    When the whole curve lies beyond r the integrand is the constant
    r^2 / 2 and the result equals (r^2 / 2) * projected length; this exact
    identity is asserted.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    p = np.asarray(p, dtype=np.float64)
    starts, ends = _segment_endpoints(curve)
    total = 0.0
    sweep_sum = 0.0
    for a, b in zip(starts - p, ends - p):
        frame = _segment_polar_frame(a, b)
        if frame is None:
            continue
        sweep, a2, b2 = frame
        rho = _segment_rho(a2, b2)
        sweep_sum += sweep

        def g(phi: np.ndarray) -> np.ndarray:
            rr = rho(phi)
            return 0.5 * np.minimum(rr, r) ** 2

        total += _piecewise_simpson(g, 0.0, sweep, _clip_angles(a2, b2, r, sweep))
    dist = float(np.min(point_segment_distance(p, starts, ends)))
    if r <= dist:
        ident = 0.5 * r * r * sweep_sum
        assert abs(total - ident) <= 1e-9 * max(ident, 1e-300), "cone-area identity violated"
    return total


def _min_rho(a2: np.ndarray, b2: np.ndarray) -> float:
    """Distance from the origin to the 2-d segment a2-b2."""
    return float(point_segment_distance(np.zeros(2), a2, b2))


def clipped_projection_length(curve: PolylineCurve, p, r: float) -> float:
    """Projected length of the part of the curve inside B(p, r).

    Each edge is clipped to the ball (a quadratic in the edge parameter)
    and the surviving pieces contribute their exact arc angles.
    """
    p = np.asarray(p, dtype=np.float64)
    starts, ends = _segment_endpoints(curve)
    total = 0.0
    for a, b in zip(starts - p, ends - p):
        d = b - a
        qa = float(np.dot(d, d))
        if qa == 0.0:
            continue
        qb = 2.0 * float(np.dot(a, d))
        qc = float(np.dot(a, a)) - r * r
        disc = qb * qb - 4.0 * qa * qc
        if disc <= 0.0:
            continue
        sq = np.sqrt(disc)
        t0 = max(0.0, (-qb - sq) / (2.0 * qa))
        t1 = min(1.0, (-qb + sq) / (2.0 * qa))
        if t1 <= t0:
            continue
        u = a + t0 * d
        v = a + t1 * d
        if np.linalg.norm(u) == 0.0 or np.linalg.norm(v) == 0.0:
            continue
        total += float(vector_angle(u, v))
    return total

"""Deterministic curve factories used as fixtures everywhere.

Every closed output is screened for the 2*pi lower bound on total
curvature at construction time, so a generator bug cannot silently leak
an invalid fixture into the property sweeps.
"""

from __future__ import annotations

import numpy as np

from . import curve as cv
from .curve import PolylineCurve, make_curve
from .errors import InvalidCurveError
from .vecmath import unit, vector_angle

TWO_PI = 2.0 * np.pi


def _screen_closed(c: PolylineCurve) -> PolylineCurve:
    tc = cv.total_curvature(c)
    if c.closed and tc < TWO_PI - 1e-9:
        raise InvalidCurveError(f"generator produced closed curve with TC {tc:.6f} < 2*pi")
    return c


def _plane_basis(plane, dim: int) -> tuple[np.ndarray, np.ndarray]:
    if plane is None:
        e1 = np.zeros(dim)
        e2 = np.zeros(dim)
        e1[0] = 1.0
        e2[1] = 1.0
        return e1, e2
    e1, e2 = (np.asarray(v, dtype=np.float64) for v in plane)
    return unit(e1), unit(e2 - np.dot(e2, unit(e1)) * unit(e1))


def circle(n: int, radius: float = 1.0, center=(0.0, 0.0, 0.0), plane=None) -> PolylineCurve:
    """Regular n-gon inscribed in a circle."""
    center = np.asarray(center, dtype=np.float64)
    e1, e2 = _plane_basis(plane, len(center))
    t = TWO_PI * np.arange(n) / n
    pts = center + radius * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2)
    return _screen_closed(make_curve(pts, closed=True))


def convex_polygon(vertex_count: int, radii_profile=None, center=(0.0, 0.0, 0.0)) -> PolylineCurve:
    """Planar polygon with per-vertex radii, validated convex (TC exactly 2*pi).

    radii_profile is a scalar or sequence of vertex_count positive radii;
    profiles that break convexity are rejected.
    """
    if radii_profile is None:
        radii = np.ones(vertex_count)
    else:
        radii = np.broadcast_to(np.asarray(radii_profile, dtype=np.float64), (vertex_count,))
    if np.any(radii <= 0):
        raise InvalidCurveError("radii must be positive")
    center = np.asarray(center, dtype=np.float64)
    e1, e2 = _plane_basis(None, len(center))
    t = TWO_PI * np.arange(vertex_count) / vertex_count
    pts = center + radii[:, None] * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2)
    # convexity: consecutive in-plane edge crosses must keep one sign
    x = (pts - center) @ e1
    y = (pts - center) @ e2
    ex = np.roll(x, -1) - x
    ey = np.roll(y, -1) - y
    cross = ex * np.roll(ey, -1) - ey * np.roll(ex, -1)
    if np.any(cross <= 0):
        raise InvalidCurveError("radii profile breaks convexity")
    return _screen_closed(make_curve(pts, closed=True))


def doubled_circle(n: int, eps: float) -> PolylineCurve:
    """Closed curve traversing the unit circle twice, 2n vertices total.

    eps = 0 gives the exact double traversal (total curvature 4*pi, not
    embedded); small eps > 0 separates the two passes in radius and height
    into an embedded curve near the cylinder of radius 1.
    """
    t = TWO_PI * np.arange(2 * n) / (2 * n)  # double-traversal parameter
    r = 1.0 + eps * np.cos(t)
    pts = np.stack([r * np.cos(2 * t), r * np.sin(2 * t), eps * np.sin(t)], axis=1)
    return _screen_closed(make_curve(pts, closed=True))


def moebius_boundary(polygon_n: int, tilt_angle: float, separation: float) -> PolylineCurve:
    """Two regular convex polygons joined at a shared bottom vertex, tilted
    out of plane by +/- tilt_angle about the x-axis, traced consecutively.

    Each polygon circumscribes the unit circle (apothem 1) and sits in the
    upper half plane with one vertex at the origin. The second polygon's
    origin vertex is shifted by `separation` along +y so the curve is
    embedded. Construction fails if total curvature reaches 4*pi.
    """
    n = polygon_n
    if n < 3:
        raise InvalidCurveError("polygon needs at least 3 vertices")
    circumradius = 1.0 / np.cos(np.pi / n)
    theta = TWO_PI * np.arange(n) / n
    # vertex 0 at the origin, polygon in y >= 0
    flat = np.stack(
        [
            circumradius * np.sin(theta),
            circumradius * (1.0 - np.cos(theta)),
            np.zeros(n),
        ],
        axis=1,
    )

    def rot_x(points: np.ndarray, alpha: float) -> np.ndarray:
        out = points.copy()
        out[:, 1] = points[:, 1] * np.cos(alpha)
        out[:, 2] = points[:, 1] * np.sin(alpha)
        return out

    poly1 = rot_x(flat, +tilt_angle)
    poly2 = rot_x(flat, -tilt_angle)
    poly2[0] = poly2[0] + np.array([0.0, separation, 0.0])
    out = _screen_closed(make_curve(np.vstack([poly1, poly2]), closed=True))
    tc = cv.total_curvature(out)
    if tc >= 4.0 * np.pi:
        raise InvalidCurveError(
            f"construction left total curvature {tc:.6f} >= 4*pi; shrink tilt/separation"
        )
    return out


def torus_knot(p: int, q: int, n: int, big_radius: float = 2.0, small_radius: float = 1.0) -> PolylineCurve:
    """(p, q) torus knot sampled at n vertices; (2, 3) is the trefoil."""
    t = TWO_PI * np.arange(n) / n
    r = big_radius + small_radius * np.cos(q * t)
    pts = np.stack([r * np.cos(p * t), r * np.sin(p * t), small_radius * np.sin(q * t)], axis=1)
    return _screen_closed(make_curve(pts, closed=True))


def random_trig_curve(
    seed: int, harmonics: int = 3, amplitude: float = 1.0, n: int = 128, dim: int = 3
) -> PolylineCurve:
    """Seeded closed trigonometric-polynomial curve sampled to a polyline.

    Coefficients decay like 1/h so higher harmonics perturb rather than
    dominate; the constant first harmonic keeps the curve honestly closed
    and non-self-tangent for typical seeds.
    """
    rng = np.random.default_rng(seed)
    t = TWO_PI * np.arange(n) / n
    pts = np.zeros((n, dim))
    for h in range(1, harmonics + 1):
        a = rng.normal(size=dim) * amplitude / h
        b = rng.normal(size=dim) * amplitude / h
        pts += np.outer(np.cos(h * t), a) + np.outer(np.sin(h * t), b)
    return _screen_closed(make_curve(pts, closed=True))


def circle_pair(
    radius1: float, radius2: float, gap: float, n: int = 96
) -> tuple[PolylineCurve, PolylineCurve]:
    """Two coaxial plane circles in parallel planes `gap` apart."""
    c1 = circle(n, radius1, center=(0.0, 0.0, -gap / 2.0))
    c2 = circle(n, radius2, center=(0.0, 0.0, +gap / 2.0))
    return c1, c2


def round_corners(c: PolylineCurve, radius: float, segments_per_corner: int = 8) -> PolylineCurve:
    """Replace each corner by an inscribed circular fillet of the given radius.

    The fillet turns by exactly the corner's exterior angle, so total
    curvature is preserved up to floating point. Requires the tangency
    offsets to fit inside the incident edges.
    """
    if not c.closed:
        raise InvalidCurveError("corner rounding is implemented for closed curves")
    v = c.vertices
    n = len(v)
    out = []
    for i in range(n):
        prev_v = v[(i - 1) % n]
        next_v = v[(i + 1) % n]
        d_in = unit(v[i] - prev_v)
        d_out = unit(next_v - v[i])
        theta = float(vector_angle(d_in, d_out))
        if theta < 1e-12:
            out.append(v[i])
            continue
        offset = radius * np.tan(theta / 2.0)
        if offset > 0.5 * min(
            np.linalg.norm(v[i] - prev_v), np.linalg.norm(next_v - v[i])
        ):
            raise InvalidCurveError("fillet radius too large for incident edges")
        a = v[i] - offset * d_in
        b = v[i] + offset * d_out
        # sample the arc by rotating d_in toward d_out in their common plane
        e1 = d_in
        w = d_out - np.dot(d_out, e1) * e1
        e2 = w / np.linalg.norm(w)
        # arc center sits along the inward normal at distance `radius`
        center = a + radius * e2
        for k in range(segments_per_corner + 1):
            phi = theta * k / segments_per_corner
            # tangent rotates by phi; position traces the circle
            point = center + radius * (np.sin(phi) * e1 - np.cos(phi) * e2)
            out.append(point)
    return _screen_closed(make_curve(np.asarray(out), closed=True, merge_close=True))

"""Polygonal space curves: total curvature, exterior angles, chord bounds.

A curve is a finite ordered vertex list in R^N. Closed curves wrap
implicitly (the first vertex is not repeated). Total curvature is the sum
of turning angles at vertices, which for a polygon is also the supremum
over inscribed polygons, so refinement can only increase it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateChordError,
    IndexOrderError,
    InvalidCurveError,
    NoExteriorAngleError,
    RefinementError,
)
from .vecmath import pairwise_diameter, segment_segment_distance, unit, vector_angle

# Consecutive vertices closer than this fraction of the diameter are treated
# as duplicates and rejected (or merged when merge_close=True).
DUPLICATE_TOL = 1e-12


@dataclass(frozen=True)
class PolylineCurve:
    """Ordered vertex list in R^dim, closed or open.

    Vertices are stored as a read-only (n, dim) float array. Closed curves
    need at least 3 vertices, open curves at least 2, and consecutive
    vertices must be distinct.
    """

    dim: int
    vertices: np.ndarray
    closed: bool

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=np.float64)
        if verts.ndim != 2 or verts.shape[1] != self.dim:
            raise InvalidCurveError(f"vertices must be (n, {self.dim}), got {verts.shape}")
        if self.dim < 2:
            raise InvalidCurveError("ambient dimension must be >= 2")
        if not np.all(np.isfinite(verts)):
            raise InvalidCurveError("vertex coordinates must be finite")
        n = len(verts)
        if self.closed and n < 3:
            raise InvalidCurveError("closed curve needs at least 3 vertices")
        if not self.closed and n < 2:
            raise InvalidCurveError("open curve needs at least 2 vertices")
        diam = pairwise_diameter(verts)
        edges = verts[1:] - verts[:-1]
        if self.closed:
            edges = np.vstack([edges, verts[0] - verts[-1]])
        lengths = np.linalg.norm(edges, axis=1)
        if np.any(lengths <= DUPLICATE_TOL * max(diam, 1e-300)):
            raise InvalidCurveError("consecutive vertices coincide (degenerate edge)")
        verts = verts.copy()
        verts.flags.writeable = False
        object.__setattr__(self, "vertices", verts)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.vertices) if self.closed else len(self.vertices) - 1

    def edge_vectors(self) -> np.ndarray:
        v = self.vertices
        e = v[1:] - v[:-1]
        if self.closed:
            e = np.vstack([e, v[0] - v[-1]])
        return e

    def edge_directions(self) -> np.ndarray:
        return unit(self.edge_vectors())


@dataclass(frozen=True)
class TangentPair:
    """One-sided tangents at a vertex: t_minus incoming, t_plus outgoing."""

    t_plus: np.ndarray
    t_minus: np.ndarray

    def __post_init__(self):
        for v in (self.t_plus, self.t_minus):
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError("one-sided tangents must be unit vectors")


@dataclass(frozen=True)
class ChordAngleBound:
    holds: bool
    angle: float
    curvature: float
    slack: float


@dataclass(frozen=True)
class ChordLengthBound:
    applicable: bool
    holds: bool
    ratio: float
    bound: float


def make_curve(vertices: Sequence, closed: bool, merge_close: bool = False) -> PolylineCurve:
    """Build a PolylineCurve, optionally merging near-duplicate neighbors.

    merge_close collapses consecutive vertices closer than DUPLICATE_TOL
    times the diameter instead of rejecting them. Off by default.
    """
    verts = np.asarray(vertices, dtype=np.float64)
    if verts.ndim != 2:
        raise InvalidCurveError("vertices must be a 2-d array of points")
    if merge_close and len(verts) > 1:
        diam = pairwise_diameter(verts)
        tol = DUPLICATE_TOL * max(diam, 1e-300)
        keep = [0]
        for i in range(1, len(verts)):
            if np.linalg.norm(verts[i] - verts[keep[-1]]) > tol:
                keep.append(i)
        if closed and len(keep) > 1:
            if np.linalg.norm(verts[keep[-1]] - verts[keep[0]]) <= tol:
                keep.pop()
        verts = verts[keep]
    return PolylineCurve(dim=verts.shape[1], vertices=verts, closed=closed)


def turning_angles(curve: PolylineCurve) -> np.ndarray:
    """Turning angle at each vertex carrying one (all vertices if closed,
    interior vertices if open), in [0, pi]."""
    d = curve.edge_directions()
    if curve.closed:
        incoming = np.roll(d, 1, axis=0)
        return np.asarray(vector_angle(incoming, d))
    return np.asarray(vector_angle(d[:-1], d[1:]))


def total_curvature(curve: PolylineCurve) -> float:
    """Sum of turning angles; endpoints of open curves contribute nothing."""
    return float(np.sum(turning_angles(curve)))


def exterior_angle(curve: PolylineCurve, vertex_index: int) -> float:
    """Turning angle at one vertex: 0 straight, pi at a cusp."""
    n = curve.n_vertices
    i = vertex_index
    if not 0 <= i < n:
        raise IndexError(f"vertex index {i} out of range")
    if not curve.closed and (i == 0 or i == n - 1):
        raise NoExteriorAngleError("open-curve endpoint has no exterior angle")
    v = curve.vertices
    incoming = v[i] - v[(i - 1) % n]
    outgoing = v[(i + 1) % n] - v[i]
    return float(vector_angle(incoming, outgoing))


def one_sided_tangents(curve: PolylineCurve, vertex_index: int) -> TangentPair:
    """Exact one-sided tangents at a vertex of a polyline."""
    n = curve.n_vertices
    i = vertex_index
    if not 0 <= i < n:
        raise IndexError(f"vertex index {i} out of range")
    if not curve.closed and (i == 0 or i == n - 1):
        raise NoExteriorAngleError("open-curve endpoint has only one tangent")
    v = curve.vertices
    t_minus = unit(v[i] - v[(i - 1) % n])
    t_plus = unit(v[(i + 1) % n] - v[i])
    return TangentPair(t_plus=t_plus, t_minus=t_minus)


def chord_direction(curve: PolylineCurve, i: int, j: int) -> np.ndarray:
    """Unit chord from vertex i to vertex j (i < j in parameter order)."""
    if not i < j:
        raise IndexOrderError(f"need i < j, got {i}, {j}")
    v = curve.vertices
    chord = v[j] - v[i]
    norm = np.linalg.norm(chord)
    if norm <= DUPLICATE_TOL * max(pairwise_diameter(v), 1e-300):
        raise DegenerateChordError(f"vertices {i} and {j} coincide")
    return chord / norm


def _subcurve(curve: PolylineCurve, a: int, b: int) -> PolylineCurve:
    """Open sub-polyline over vertex indices a..b (parameter order)."""
    if not 0 <= a < b < curve.n_vertices:
        raise IndexOrderError(f"need 0 <= a < b < n, got {a}, {b}")
    return PolylineCurve(dim=curve.dim, vertices=curve.vertices[a : b + 1], closed=False)


def chord_angle_bound_check(
    curve: PolylineCurve, a: int, x: int, y: int, b: int, tol: float = 1e-9
) -> ChordAngleBound:
    """Check angle(T_ax, T_yb) <= total curvature of the arc strictly
    between a and b, for a < x <= y < b."""
    if not (a < x <= y < b):
        raise IndexOrderError(f"need a < x <= y < b, got {a}, {x}, {y}, {b}")
    t_ax = chord_direction(curve, a, x)
    t_yb = chord_direction(curve, y, b)
    ang = float(vector_angle(t_ax, t_yb))
    kappa = total_curvature(_subcurve(curve, a, b))
    slack = kappa - ang
    return ChordAngleBound(holds=slack >= -tol, angle=ang, curvature=kappa, slack=slack)


def chord_length_bound_check(
    curve: PolylineCurve, a: int, b: int, tol: float = 1e-9
) -> ChordLengthBound:
    """Check arclength(a, b) <= chord(a, b) / cos(2*kappa) when the arc's
    total curvature kappa is below pi/4; otherwise report not applicable."""
    sub = _subcurve(curve, a, b)
    kappa = total_curvature(sub)
    if kappa >= np.pi / 4:
        return ChordLengthBound(applicable=False, holds=True, ratio=np.nan, bound=np.nan)
    chord = np.linalg.norm(curve.vertices[b] - curve.vertices[a])
    if chord == 0.0:
        raise DegenerateChordError(f"vertices {a} and {b} coincide")
    ratio = arclength(sub) / chord
    bound = 1.0 / np.cos(2.0 * kappa)
    return ChordLengthBound(applicable=True, holds=ratio <= bound + tol, ratio=ratio, bound=bound)


def arclength(curve: PolylineCurve) -> float:
    return float(np.sum(np.linalg.norm(curve.edge_vectors(), axis=1)))


def diameter(curve: PolylineCurve) -> float:
    return pairwise_diameter(curve.vertices)


def rectifiability_ratio(curve: PolylineCurve) -> float:
    """(diameter * total curvature) / length for a closed curve.

    Bounded below by a dimensional constant; the empirical floor in R^3
    is documented in the test suite, not exported as an API constant.
    """
    if not curve.closed:
        raise InvalidCurveError("rectifiability ratio is defined for closed curves")
    return diameter(curve) * total_curvature(curve) / arclength(curve)


def min_segment_separation(curve: PolylineCurve) -> float:
    """Min distance between non-adjacent edges; > 0 means embedded.

    Adjacent means sharing a vertex (with wraparound for closed curves).
    Returns inf for curves with fewer than two non-adjacent edges.
    """
    v = curve.vertices
    m = curve.n_edges
    starts = v
    ends = np.roll(v, -1, axis=0)
    if not curve.closed:
        starts = v[:-1]
        ends = v[1:]
    ii, jj = np.triu_indices(m, k=2)
    if curve.closed:
        keep = ~((ii == 0) & (jj == m - 1))
        ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        return np.inf
    d = segment_segment_distance(starts[ii], ends[ii], starts[jj], ends[jj])
    return float(np.min(d))


def refine_to_tolerance(
    sampler: Callable[[np.ndarray], np.ndarray],
    tc_tol: float,
    initial: int = 16,
    max_doublings: int = 20,
    closed: bool = True,
) -> PolylineCurve:
    """Dyadically refine an inscribed polygon of a parametric curve until
    total curvature stabilizes below tc_tol.

    sampler maps an array of parameters in [0, 1) to points (k, dim).
    Inscribed total curvature is nondecreasing under refinement; this is
    asserted at every doubling.
    """
    if tc_tol <= 0:
        raise ValueError("tc_tol must be positive")
    n = initial
    prev = None
    prev_tc = None
    for _ in range(max_doublings + 1):
        ts = np.arange(n, dtype=np.float64) / n
        pts = np.asarray(sampler(ts), dtype=np.float64)
        cur = make_curve(pts, closed=closed)
        tc = total_curvature(cur)
        if prev_tc is not None:
            if tc < prev_tc - 1e-9 * max(1.0, prev_tc):
                raise RefinementError("inscribed total curvature decreased under refinement")
            if abs(tc - prev_tc) < tc_tol:
                return cur
        prev, prev_tc = cur, tc
        n *= 2
    raise RefinementError(f"no convergence to {tc_tol} after {max_doublings} doublings")


# ---------------------------------------------------------------------------
# JSON curve files: {"dim": N, "closed": bool, "vertices": [[...], ...]}


def to_json_dict(curve: PolylineCurve) -> dict:
    return {
        "dim": curve.dim,
        "closed": curve.closed,
        "vertices": curve.vertices.tolist(),
    }


def from_json_dict(data: dict) -> PolylineCurve:
    try:
        dim = int(data["dim"])
        closed = bool(data["closed"])
        vertices = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise InvalidCurveError(f"malformed curve record: {exc}") from exc
    verts = np.asarray(vertices, dtype=np.float64)
    if verts.ndim != 2 or verts.shape[1] != dim:
        raise InvalidCurveError("vertex array does not match declared dimension")
    if not np.all(np.isfinite(verts)):
        raise InvalidCurveError("curve file contains NaN or Inf coordinates")
    return PolylineCurve(dim=dim, vertices=verts, closed=closed)


def save_curve(curve: PolylineCurve, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json_dict(curve)), encoding="utf-8")


def load_curve(path: str | Path) -> PolylineCurve:
    return from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))

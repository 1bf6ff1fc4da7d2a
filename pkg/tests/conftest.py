"""Shared fixtures: the generator corpus and seeded samplers."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from curvelab import curve as cv
from curvelab import generators as gen
from curvelab.plateau import TriangleMesh
from curvelab.vecmath import point_segment_distance


def closed_corpus() -> dict[str, cv.PolylineCurve]:
    """Closed fixtures spanning every construction the suite leans on."""
    return {
        "circle": gen.circle(128),
        "ellipse": gen.circle(96, radius=1.0, plane=((2.0, 0, 0), (0, 1.0, 0))),
        "square": gen.convex_polygon(4),
        "polygon9": gen.convex_polygon(9, [1.0, 1.1, 0.9, 1.05, 1.0, 0.95, 1.1, 1.0, 0.9]),
        "doubled": gen.doubled_circle(96, 0.05),
        "moebius": gen.moebius_boundary(12, 0.1, 0.01),
        "trefoil": gen.torus_knot(2, 3, 256),
        "trig3": gen.random_trig_curve(3, harmonics=3, amplitude=0.8, n=128),
        "trig11": gen.random_trig_curve(11, harmonics=4, amplitude=0.6, n=160),
        "trig27": gen.random_trig_curve(27, harmonics=2, amplitude=1.0, n=96),
    }


@pytest.fixture(scope="session")
def corpus() -> dict[str, cv.PolylineCurve]:
    return closed_corpus()


def sample_viewpoints(curve: cv.PolylineCurve, count: int, seed: int) -> np.ndarray:
    """Seeded viewpoints in a box around the curve, kept off the curve."""
    rng = np.random.default_rng(seed)
    lo = np.min(curve.vertices, axis=0)
    hi = np.max(curve.vertices, axis=0)
    span = np.maximum(hi - lo, 1e-9)
    starts = curve.vertices if curve.closed else curve.vertices[:-1]
    ends = np.roll(curve.vertices, -1, axis=0) if curve.closed else curve.vertices[1:]
    tol = 1e-5 * cv.diameter(curve)
    out = []
    while len(out) < count:
        p = lo - 0.5 * span + 2.0 * span * rng.random(curve.dim)
        if np.min(point_segment_distance(p, starts, ends)) > tol:
            out.append(p)
    return np.asarray(out)


def warped_circle(n: int, amp: float, k: int) -> cv.PolylineCurve:
    """Unit circle with a vertical harmonic: a graph-like saddle boundary.

    The disk it bounds is a graph over the unit disk, so the solver lands
    on an embedded surface from an embedded start.
    """
    t = 2.0 * np.pi * np.arange(n) / n
    pts = np.stack([np.cos(t), np.sin(t), amp * np.sin(k * t)], axis=1)
    return cv.make_curve(pts, closed=True)


def square_grid_mesh(k: int = 8) -> TriangleMesh:
    """Flat unit-square mesh on a (k+1) x (k+1) grid, boundary pinned."""
    xs = np.linspace(0.0, 1.0, k + 1)
    verts = np.array([[x, y, 0.0] for y in xs for x in xs])

    def vid(i: int, j: int) -> int:
        return j * (k + 1) + i

    tris = []
    for j in range(k):
        for i in range(k):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    loop = (
        [vid(i, 0) for i in range(k)]
        + [vid(k, j) for j in range(k)]
        + [vid(k - i, k) for i in range(k)]
        + [vid(0, k - j) for j in range(k)]
    )
    boundary = cv.PolylineCurve(dim=3, vertices=verts[loop], closed=True)
    return TriangleMesh(
        vertices=verts,
        triangles=np.asarray(tris),
        boundary_loops=[loop],
        boundary_curves=[boundary],
        topology="disk",
        orientable=True,
    )


def folded_strip_mesh() -> TriangleMesh:
    """Flat strip folded back through itself: a guaranteed self-crossing."""
    cols = 9  # x = 0 .. 4 in steps of 0.5
    xs = 0.5 * np.arange(cols)
    rows = []
    for y in (0.0, 1.0):
        row = []
        for x in xs:
            if x <= 2.0:
                row.append((x, y, 0.0))
            else:
                # fold back over the head, crossing its plane at x = 3.25
                row.append((4.0 - x, y, 0.15 * (3.25 - x)))
        rows.append(row)
    verts = np.array(rows[0] + rows[1])

    def vid(i: int, j: int) -> int:
        return j * cols + i

    tris = []
    for i in range(cols - 1):
        a, b = vid(i, 0), vid(i + 1, 0)
        c, d = vid(i + 1, 1), vid(i, 1)
        tris.append((a, b, c))
        tris.append((a, c, d))
    loop = (
        [vid(i, 0) for i in range(cols - 1)]
        + [vid(cols - 1, 0)]
        + [vid(cols - 1 - i, 1) for i in range(cols)]
    )
    boundary = cv.PolylineCurve(dim=3, vertices=verts[loop], closed=True)
    return TriangleMesh(
        vertices=verts,
        triangles=np.asarray(tris),
        boundary_loops=[loop],
        boundary_curves=[boundary],
        topology="disk",
        orientable=True,
    )

"""Surface area inside a ball, by adaptive triangle subdivision.

Triangles entirely inside the ball count exactly; triangles crossing the
sphere are bisected along their longest edge until smaller than a fraction
of the radius, then resolved by a centroid test. The reported error bound
is the total area of the unresolved crossing cells.
"""

from __future__ import annotations

import numpy as np

from ..vecmath import triangle_areas
from .mesh import TriangleMesh

CROSSING_CELL_FRACTION = 1e-3


def _point_triangle_distance(p: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """Distance from p to each triangle in a (k, 3, dim) stack.

    Region-based closest-point computation on the triangle's barycentric
    plane; works in any ambient dimension.
    """
    a = tri[:, 0, :]
    b = tri[:, 1, :]
    c = tri[:, 2, :]
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = np.sum(ab * ap, axis=1)
    d2 = np.sum(ac * ap, axis=1)
    bp = p - b
    d3 = np.sum(ab * bp, axis=1)
    d4 = np.sum(ac * bp, axis=1)
    cp = p - c
    d5 = np.sum(ab * cp, axis=1)
    d6 = np.sum(ac * cp, axis=1)

    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    denom_ab = d1 - d3
    denom_ac = d2 - d6
    denom_bc = (d4 - d3) + (d5 - d6)

    closest = np.empty_like(a)

    reg_a = (d1 <= 0) & (d2 <= 0)
    reg_b = (d3 >= 0) & (d4 <= d3)
    reg_c = (d6 >= 0) & (d5 <= d6)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_ab = np.where(denom_ab != 0, d1 / np.where(denom_ab != 0, denom_ab, 1.0), 0.0)
        t_ac = np.where(denom_ac != 0, d2 / np.where(denom_ac != 0, denom_ac, 1.0), 0.0)
        t_bc = np.where(denom_bc != 0, (d4 - d3) / np.where(denom_bc != 0, denom_bc, 1.0), 0.0)
    reg_ab = (~reg_a) & (~reg_b) & (vc <= 0) & (d1 >= 0) & (d3 <= 0)
    reg_ac = (~reg_a) & (~reg_c) & (vb <= 0) & (d2 >= 0) & (d6 <= 0)
    reg_bc = (~reg_b) & (~reg_c) & (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0)

    interior = ~(reg_a | reg_b | reg_c | reg_ab | reg_ac | reg_bc)
    denom = va + vb + vc
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(denom != 0, vb / np.where(denom != 0, denom, 1.0), 0.0)
        w = np.where(denom != 0, vc / np.where(denom != 0, denom, 1.0), 0.0)

    closest[:] = a  # region A default
    closest[reg_b] = b[reg_b]
    closest[reg_c] = c[reg_c]
    closest[reg_ab] = a[reg_ab] + np.clip(t_ab[reg_ab], 0, 1)[:, None] * ab[reg_ab]
    closest[reg_ac] = a[reg_ac] + np.clip(t_ac[reg_ac], 0, 1)[:, None] * ac[reg_ac]
    closest[reg_bc] = b[reg_bc] + np.clip(t_bc[reg_bc], 0, 1)[:, None] * (c - b)[reg_bc]
    closest[interior] = (
        a[interior] + v[interior][:, None] * ab[interior] + w[interior][:, None] * ac[interior]
    )
    return np.linalg.norm(p - closest, axis=1)


def area_in_ball_with_error(mesh: TriangleMesh, p, r: float) -> tuple[float, float]:
    """Area of the mesh inside B(p, r) plus a bound on the clipping error."""
    if r <= 0:
        raise ValueError("radius must be positive")
    p = np.asarray(p, dtype=np.float64)
    tris = mesh.triangle_coords()
    area = 0.0
    cell_limit = CROSSING_CELL_FRACTION * r
    max_rounds = 80

    err_bound = 0.0
    queue = tris
    for _ in range(max_rounds):
        if len(queue) == 0:
            return area, err_bound
        vert_d = np.linalg.norm(queue - p, axis=2)
        inside_full = np.max(vert_d, axis=1) <= r
        min_d = _point_triangle_distance(p, queue)
        outside_full = min_d >= r
        crossing = ~(inside_full | outside_full)

        area += float(np.sum(triangle_areas(queue[inside_full])))
        queue = queue[crossing]
        if len(queue) == 0:
            return area, err_bound

        edge_len = np.stack(
            [
                np.linalg.norm(queue[:, 1] - queue[:, 0], axis=1),
                np.linalg.norm(queue[:, 2] - queue[:, 1], axis=1),
                np.linalg.norm(queue[:, 0] - queue[:, 2], axis=1),
            ],
            axis=1,
        )
        longest = np.max(edge_len, axis=1)
        small = longest < cell_limit
        leaves = queue[small]
        if len(leaves):
            centroid_in = np.linalg.norm(np.mean(leaves, axis=1) - p, axis=1) <= r
            area += float(np.sum(triangle_areas(leaves[centroid_in])))
            err_bound += float(np.sum(triangle_areas(leaves)))
        queue = queue[~small]
        if len(queue) == 0:
            return area, err_bound

        # bisect the longest edge of every remaining crossing triangle
        which = np.argmax(edge_len[~small], axis=1)
        rows = np.arange(len(queue))
        a = queue[rows, which]
        b = queue[rows, (which + 1) % 3]
        c = queue[rows, (which + 2) % 3]
        m = 0.5 * (a + b)
        child1 = np.stack([a, m, c], axis=1)
        child2 = np.stack([m, b, c], axis=1)
        queue = np.concatenate([child1, child2], axis=0)

    # depth budget exhausted: resolve leftovers by centroid and report them
    centroid_in = np.linalg.norm(np.mean(queue, axis=1) - p, axis=1) <= r
    err_bound += float(np.sum(triangle_areas(queue)))
    area += float(np.sum(triangle_areas(queue[centroid_in])))
    return area, err_bound


def area_in_ball(mesh: TriangleMesh, p, r: float) -> float:
    return area_in_ball_with_error(mesh, p, r)[0]


def density_ratio(mesh: TriangleMesh, p, r: float) -> float:
    """area(mesh inside B(p, r)) / (pi r^2)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    return area_in_ball(mesh, p, r) / (np.pi * r * r)

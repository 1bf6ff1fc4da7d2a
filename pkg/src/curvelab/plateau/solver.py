"""Area minimization with pinned boundary vertices.

Damped gradient descent on total triangle area. The gradient at a vertex
is the cotangent-weighted sum over its one-ring (the discrete mean
curvature direction); steps are diagonally preconditioned and accepted
only when total area strictly decreases, so descent is an invariant, not
a hope. Periodic remeshing (tangential smoothing plus area-safe edge
flips) keeps triangle quality from degrading as vertices drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SolverDegenerateError
from ..vecmath import triangle_areas
from .mesh import DEGENERACY_FLOOR, TriangleMesh, _edge_key, edge_triangle_map

_COT_CLAMP = 1e8


@dataclass(frozen=True)
class SolverParams:
    max_iters: int = 2000
    grad_tol: float = 1e-6
    area_tol: float = 1e-12
    step_rule: str = "backtracking"
    remesh_every: int = 50
    seed: int = 0
    fixed_step: float = 0.5

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.grad_tol <= 0 or self.area_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError("step_rule must be 'fixed' or 'backtracking'")


@dataclass
class ConvergenceReport:
    area: float
    iterations: int
    residual: float
    converged: bool
    reason: str
    area_history: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "area": self.area,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "reason": self.reason,
        }


def _total_area(v: np.ndarray, t: np.ndarray) -> float:
    return float(np.sum(triangle_areas(v[t])))


def _cotangents(v: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Cotangent of the interior angle at each triangle corner, (m, 3)."""
    cots = np.empty((len(t), 3))
    for k in range(3):
        p = v[t[:, k]]
        a = v[t[:, (k + 1) % 3]] - p
        b = v[t[:, (k + 2) % 3]] - p
        dot = np.sum(a * b, axis=1)
        g = np.sum(a * a, axis=1) * np.sum(b * b, axis=1) - dot * dot
        cross = np.sqrt(np.maximum(g, 0.0))
        cots[:, k] = dot / np.maximum(cross, 1e-300)
    return np.clip(cots, -_COT_CLAMP, _COT_CLAMP)


def area_gradient(v: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of total area per vertex and the preconditioner diagonal.

    Per triangle (i, j, k) the gradient at i is half of
    cot(angle k) (p_i - p_j) + cot(angle j) (p_i - p_k).
    """
    cots = _cotangents(v, t)
    grad = np.zeros_like(v)
    diag = np.zeros(len(v))
    for k in range(3):
        i = t[:, k]
        j = t[:, (k + 1) % 3]
        l = t[:, (k + 2) % 3]
        w_ij = 0.5 * cots[:, (k + 2) % 3]  # angle opposite edge (i, j)
        w_il = 0.5 * cots[:, (k + 1) % 3]
        np.add.at(grad, i, w_ij[:, None] * (v[i] - v[j]) + w_il[:, None] * (v[i] - v[l]))
        np.add.at(diag, i, w_ij + w_il)
    return grad, diag


def _vertex_normals(v: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Locally sign-aligned area-weighted vertex normals (3-d only).

    Signs of incident triangle normals are flipped to agree with the first
    incident triangle, which works on nonorientable meshes too.
    """
    tri_n = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
    normals = np.zeros_like(v)
    seen_ref = {}
    for row, tri in enumerate(t):
        n = tri_n[row]
        for vid in tri:
            ref = seen_ref.get(int(vid))
            if ref is None:
                seen_ref[int(vid)] = n
                normals[vid] += n
            else:
                normals[vid] += n if np.dot(n, ref) >= 0 else -n
    lens = np.linalg.norm(normals, axis=1)
    ok = lens > 0
    normals[ok] /= lens[ok][:, None]
    return normals


def _tangential_smooth(
    v: np.ndarray, t: np.ndarray, free: np.ndarray, lam: float = 0.5
) -> np.ndarray:
    """Move free vertices toward their 1-ring centroid, tangentially."""
    nbr_sum = np.zeros_like(v)
    nbr_cnt = np.zeros(len(v))
    edges = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]], axis=0)
    edges = np.unique(np.sort(edges, axis=1), axis=0)
    for a, b in ((0, 1), (1, 0)):
        np.add.at(nbr_sum, edges[:, a], v[edges[:, b]])
        np.add.at(nbr_cnt, edges[:, a], 1.0)
    centroid = nbr_sum / np.maximum(nbr_cnt, 1.0)[:, None]
    disp = centroid - v
    if v.shape[1] == 3:
        n = _vertex_normals(v, t)
        disp -= np.sum(disp * n, axis=1)[:, None] * n
    out = v.copy()
    out[free] += lam * disp[free]
    return out


def _edge_flips(v: np.ndarray, t: np.ndarray, floor: float) -> np.ndarray:
    """Flip interior edges when that lowers the pair's max angle without
    increasing area. Returns a new triangle array."""
    tris = t.copy()
    e2t = edge_triangle_map(tris)
    existing = set(e2t.keys())
    dirty = np.zeros(len(tris), dtype=bool)

    def max_angle(p0, p1, p2):
        cots = _cotangents(np.stack([p0, p1, p2]), np.array([[0, 1, 2]]))
        return float(np.max(np.arctan2(1.0, cots)))

    for key, owners in e2t.items():
        if len(owners) != 2:
            continue
        t1, t2 = owners
        if dirty[t1] or dirty[t2]:
            continue
        tri1, tri2 = tris[t1], tris[t2]
        a, b = key
        # orient (a, b) as traversed by tri1 so the flip keeps the local
        # orientation convention of both neighbors
        directed = {(int(tri1[k]), int(tri1[(k + 1) % 3])) for k in range(3)}
        if (a, b) not in directed:
            a, b = b, a
        c = [x for x in tri1 if x not in key]
        d = [x for x in tri2 if x not in key]
        if len(c) != 1 or len(d) != 1:
            continue
        c, d = int(c[0]), int(d[0])
        if c == d or _edge_key(c, d) in existing:
            continue
        old1 = triangle_areas(v[tris[[t1]]])[0]
        old2 = triangle_areas(v[tris[[t2]]])[0]
        new_t1 = np.array([c, a, d])
        new_t2 = np.array([c, d, b])
        n1 = triangle_areas(v[new_t1][None, :, :])[0]
        n2 = triangle_areas(v[new_t2][None, :, :])[0]
        if n1 <= floor or n2 <= floor:
            continue
        if n1 + n2 > old1 + old2 + 1e-12 * (old1 + old2):
            continue
        ang_old = max(
            max_angle(v[tri1[0]], v[tri1[1]], v[tri1[2]]),
            max_angle(v[tri2[0]], v[tri2[1]], v[tri2[2]]),
        )
        ang_new = max(
            max_angle(v[new_t1[0]], v[new_t1[1]], v[new_t1[2]]),
            max_angle(v[new_t2[0]], v[new_t2[1]], v[new_t2[2]]),
        )
        if ang_new >= ang_old:
            continue
        tris[t1] = new_t1
        tris[t2] = new_t2
        dirty[t1] = dirty[t2] = True
        existing.discard(key)
        existing.add(_edge_key(c, d))
    return tris


def minimize_area(
    mesh: TriangleMesh, params: SolverParams | None = None
) -> tuple[TriangleMesh, ConvergenceReport]:
    """Descend total area over interior vertices; boundary stays pinned.

    Returns a new mesh and a convergence report. Raises
    SolverDegenerateError if triangles collapse beyond repair.
    """
    params = params or SolverParams()
    v = mesh.vertices.copy()
    t = mesh.triangles.copy()
    free = ~mesh.boundary_vertex_mask()
    scale = mesh.scale
    floor = DEGENERACY_FLOOR * scale**2

    area = _total_area(v, t)
    history = [area]
    residual = np.inf
    step = 1.0
    reason = "max_iters"
    converged = False
    iters = 0

    for it in range(params.max_iters):
        iters = it + 1
        if params.remesh_every and it > 0 and it % params.remesh_every == 0:
            v, t, area = _remesh(v, t, free, area, floor, params)

        grad, diag = area_gradient(v, t)
        grad[~free] = 0.0
        gnorm = float(np.max(np.linalg.norm(grad, axis=1), initial=0.0))
        residual = gnorm * scale / max(area, 1e-300)
        if residual < params.grad_tol:
            converged = True
            reason = "gradient"
            break

        pos = diag[diag > 0]
        ref = float(np.median(pos)) if len(pos) else 1.0
        w = np.maximum(diag, 0.2 * ref)
        direction = -grad / w[:, None]

        if params.step_rule == "fixed":
            v_new = v + params.fixed_step * direction
            new_area = _total_area(v_new, t)
            if new_area >= area:
                reason = "stalled"
                break
            v, area = v_new, new_area
        else:
            accepted = False
            tstep = step
            for _ in range(40):
                v_new = v + tstep * direction
                new_area = _total_area(v_new, t)
                if new_area < area:
                    accepted = True
                    break
                tstep *= 0.5
            if not accepted:
                converged = residual < 10 * params.grad_tol
                reason = "line_search_stalled"
                break
            v, area = v_new, new_area
            step = min(tstep * 1.3, 1.0)

        assert area <= history[-1] + 1e-12 * max(history[-1], 1.0), "area increased"
        history.append(area)
        if len(history) > 10:
            ref_area = history[-11]
            if abs(ref_area - area) < params.area_tol * max(ref_area, 1e-300) * 10:
                converged = True
                reason = "area_change"
                break

    if np.any(triangle_areas(v[t]) <= floor):
        v, t, area = _remesh(v, t, free, area, floor, params)

    out = TriangleMesh(
        vertices=v,
        triangles=t,
        boundary_loops=[list(l) for l in mesh.boundary_loops],
        boundary_curves=list(mesh.boundary_curves),
        topology=mesh.topology,
        orientable=mesh.orientable,
    )
    report = ConvergenceReport(
        area=area,
        iterations=iters,
        residual=residual,
        converged=converged,
        reason=reason,
        area_history=history,
    )
    return out, report


def _remesh(
    v: np.ndarray,
    t: np.ndarray,
    free: np.ndarray,
    area: float,
    floor: float,
    params: SolverParams,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Quality pass: tangential smoothing then edge flips, both area-safe."""
    lam = 0.5
    for _ in range(6):
        v_s = _tangential_smooth(v, t, free, lam)
        a_s = _total_area(v_s, t)
        if a_s <= area * (1.0 + 1e-12) and np.all(triangle_areas(v_s[t]) > floor):
            v, area = v_s, a_s
            break
        lam *= 0.5
    t_f = _edge_flips(v, t, floor)
    a_f = _total_area(v, t_f)
    if a_f <= area * (1.0 + 1e-12):
        t, area = t_f, a_f
    if np.any(triangle_areas(v[t]) <= floor):
        raise SolverDegenerateError("triangle collapse not recoverable by remeshing")
    return v, t, area

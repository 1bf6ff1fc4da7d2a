"""Triangle meshes with pinned polygonal boundaries.

A mesh carries its boundary loops as index cycles pinned to curves, a
topology tag, and an orientability verdict backed by a combinatorial
witness (the set of edges where a consistent triangle orientation fails),
so nonorientability never rests on geometric heuristics.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ..curve import PolylineCurve
from ..errors import MeshError
from ..vecmath import triangle_areas, vector_angle

DEGENERACY_FLOOR = 1e-14  # of mesh scale squared

TOPOLOGIES = ("disk", "annulus", "moebius")


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def edge_triangle_map(triangles: np.ndarray) -> dict[tuple[int, int], list[int]]:
    out: dict[tuple[int, int], list[int]] = defaultdict(list)
    for t, tri in enumerate(triangles):
        for k in range(3):
            out[_edge_key(int(tri[k]), int(tri[(k + 1) % 3]))].append(t)
    return out


def try_orient(triangles: np.ndarray) -> tuple[bool, np.ndarray, list[tuple[int, int]]]:
    """Attempt a globally consistent orientation by flood fill.

    Returns (orientable, signs, conflict_edges); signs is +/-1 per triangle
    for the attempted orientation, conflict edges are where adjacent
    triangles cannot agree. Raises on non-manifold edges.
    """
    tris = np.asarray(triangles, dtype=np.int64)
    m = len(tris)
    e2t = edge_triangle_map(tris)
    for key, owners in e2t.items():
        if len(owners) > 2:
            raise MeshError(f"non-manifold edge {key} shared by {len(owners)} triangles")

    def edge_dir(t: int, key: tuple[int, int]) -> int:
        tri = tris[t]
        for k in range(3):
            a, b = int(tri[k]), int(tri[(k + 1) % 3])
            if (a, b) == key:
                return +1
            if (b, a) == key:
                return -1
        raise AssertionError("edge not in triangle")

    signs = np.zeros(m, dtype=np.int64)
    conflicts: list[tuple[int, int]] = []
    for seed in range(m):
        if signs[seed] != 0:
            continue
        signs[seed] = 1
        stack = [seed]
        while stack:
            t = stack.pop()
            tri = tris[t]
            for k in range(3):
                key = _edge_key(int(tri[k]), int(tri[(k + 1) % 3]))
                owners = e2t[key]
                if len(owners) != 2:
                    continue
                other = owners[0] if owners[1] == t else owners[1]
                # consistent orientation: the shared edge runs in opposite
                # directions in the two (sign-adjusted) triangles
                want = -signs[t] * edge_dir(t, key) * edge_dir(other, key)
                if signs[other] == 0:
                    signs[other] = want
                    stack.append(other)
                elif signs[other] != want:
                    conflicts.append(key)
    return len(conflicts) == 0, signs, conflicts


def boundary_edges(triangles: np.ndarray) -> set[tuple[int, int]]:
    return {key for key, owners in edge_triangle_map(triangles).items() if len(owners) == 1}


@dataclass
class TriangleMesh:
    """Triangulated surface with boundary loops pinned to curves."""

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_loops: list[list[int]]
    boundary_curves: list[PolylineCurve]
    topology: str
    orientable: bool = field(default=True)
    nonorientable_witness: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.vertices = np.array(self.vertices, dtype=np.float64)
        self.triangles = np.array(self.triangles, dtype=np.int64)
        self.validate()

    # -- queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def scale(self) -> float:
        lo = np.min(self.vertices, axis=0)
        hi = np.max(self.vertices, axis=0)
        return float(np.linalg.norm(hi - lo))

    def triangle_coords(self) -> np.ndarray:
        return self.vertices[self.triangles]

    def boundary_vertex_mask(self) -> np.ndarray:
        mask = np.zeros(len(self.vertices), dtype=bool)
        for loop in self.boundary_loops:
            mask[loop] = True
        return mask

    def copy(self) -> "TriangleMesh":
        return TriangleMesh(
            vertices=self.vertices.copy(),
            triangles=self.triangles.copy(),
            boundary_loops=[list(l) for l in self.boundary_loops],
            boundary_curves=list(self.boundary_curves),
            topology=self.topology,
            orientable=self.orientable,
            nonorientable_witness=list(self.nonorientable_witness),
        )

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        v, t = self.vertices, self.triangles
        if v.ndim != 2 or v.shape[1] < 2:
            raise MeshError("vertices must be (n, dim>=2)")
        if not np.all(np.isfinite(v)):
            raise MeshError("vertex coordinates must be finite")
        if t.ndim != 2 or t.shape[1] != 3:
            raise MeshError("triangles must be (m, 3)")
        if np.min(t) < 0 or np.max(t) >= len(v):
            raise MeshError("triangle index out of range")
        if self.topology not in TOPOLOGIES:
            raise MeshError(f"unknown topology {self.topology!r}")
        areas = triangle_areas(v[t])
        floor = DEGENERACY_FLOOR * self.scale**2
        if np.any(areas <= floor):
            raise MeshError("degenerate triangle below the area floor")

        declared = set()
        for loop in self.boundary_loops:
            if len(loop) < 3:
                raise MeshError("boundary loop needs at least 3 vertices")
            for i in range(len(loop)):
                declared.add(_edge_key(loop[i], loop[(i + 1) % len(loop)]))
        actual = boundary_edges(t)
        if declared != actual:
            raise MeshError("declared boundary loops do not match mesh boundary edges")

        if len(self.boundary_curves) != len(self.boundary_loops):
            raise MeshError("one pinned curve per boundary loop required")
        for loop, curve in zip(self.boundary_loops, self.boundary_curves):
            if not curve.closed or curve.n_vertices != len(loop):
                raise MeshError("pinned curve must be closed and match loop length")
            if not np.array_equal(v[loop], curve.vertices):
                raise MeshError("boundary vertices must coincide with pinned curve exactly")

        expected_loops = 2 if self.topology == "annulus" else 1
        if len(self.boundary_loops) != expected_loops:
            raise MeshError(f"{self.topology} needs {expected_loops} boundary loop(s)")

        orientable, _, conflicts = try_orient(t)
        if orientable != self.orientable:
            raise MeshError("orientable flag disagrees with combinatorial orientation")
        if self.topology == "moebius" and orientable:
            raise MeshError("moebius mesh must be nonorientable")
        if self.topology in ("disk", "annulus") and not orientable:
            raise MeshError(f"{self.topology} mesh must be orientable")
        self.nonorientable_witness = conflicts


def surface_area(mesh: TriangleMesh) -> float:
    return float(np.sum(triangle_areas(mesh.triangle_coords())))


def vertex_density(mesh: TriangleMesh, vertex_index: int) -> float:
    """Incident-angle sum over 2*pi: 1 flat interior, 1/2 straight boundary."""
    i = int(vertex_index)
    if not 0 <= i < len(mesh.vertices):
        raise IndexError(f"vertex index {i} out of range")
    rows = np.nonzero(np.any(mesh.triangles == i, axis=1))[0]
    total = 0.0
    for t in rows:
        tri = mesh.triangles[t]
        k = int(np.nonzero(tri == i)[0][0])
        p = mesh.vertices[tri[k]]
        a = mesh.vertices[tri[(k + 1) % 3]]
        b = mesh.vertices[tri[(k + 2) % 3]]
        total += float(vector_angle(a - p, b - p))
    return total / (2.0 * np.pi)


def interior_angle_defects(mesh: TriangleMesh) -> np.ndarray:
    """2*pi minus incident-angle sum at every interior vertex."""
    boundary = mesh.boundary_vertex_mask()
    sums = np.zeros(len(mesh.vertices))
    coords = mesh.triangle_coords()
    for k in range(3):
        p = coords[:, k, :]
        a = coords[:, (k + 1) % 3, :]
        b = coords[:, (k + 2) % 3, :]
        ang = np.asarray(vector_angle(a - p, b - p))
        np.add.at(sums, mesh.triangles[:, k], ang)
    return 2.0 * np.pi - sums[~boundary]


# ---------------------------------------------------------------------------
# Initial meshes


def build_initial_mesh(
    curves: PolylineCurve | list[PolylineCurve] | tuple[PolylineCurve, ...],
    topology: str,
    resolution: int,
    check_embedded: bool = False,
) -> TriangleMesh:
    """Connectivity-complete starting mesh for the area minimizer.

    disk: concentric rings between the boundary and its centroid;
    annulus: ruled band between two equal-count loops; moebius: ruled band
    pairing opposite parameters of one loop, glued with a half twist.
    resolution counts the transverse subdivisions. The boundary rows are
    the input curve vertices verbatim.
    """
    if isinstance(curves, PolylineCurve):
        curves = [curves]
    curves = list(curves)
    if topology not in TOPOLOGIES:
        raise MeshError(f"unknown topology {topology!r}")
    need = 2 if topology == "annulus" else 1
    if len(curves) != need:
        raise MeshError(f"{topology} needs {need} boundary curve(s), got {len(curves)}")
    for c in curves:
        if not c.closed:
            raise MeshError("boundary curves must be closed")
    if resolution < 2:
        raise MeshError("resolution must be at least 2")

    if topology == "disk":
        mesh = _build_disk(curves[0], resolution)
    elif topology == "annulus":
        mesh = _build_annulus(curves[0], curves[1], resolution)
    else:
        mesh = _build_moebius(curves[0], resolution)

    if check_embedded:
        from .intersect import self_intersection_report

        report = self_intersection_report(mesh)
        if report.intersecting_pairs:
            warnings.warn(
                f"initial {topology} band self-intersects "
                f"({len(report.intersecting_pairs)} triangle pairs)",
                RuntimeWarning,
                stacklevel=2,
            )
    return mesh


def _build_disk(curve: PolylineCurve, rings: int) -> TriangleMesh:
    n = curve.n_vertices
    centroid = np.mean(curve.vertices, axis=0)
    verts = [curve.vertices]  # ring `rings` (outermost) first: exact pins
    for k in range(rings - 1, 0, -1):
        f = k / rings
        verts.append(centroid + f * (curve.vertices - centroid))
    verts.append(centroid[None, :])
    v = np.vstack(verts)
    center = rings * n  # last vertex

    def ring_idx(k: int, s: int) -> int:
        # k = rings is the boundary (offset 0), k = 1 is innermost ring
        return (rings - k) * n + (s % n)

    tris = []
    for k in range(rings, 1, -1):
        for s in range(n):
            a = ring_idx(k, s)
            b = ring_idx(k, s + 1)
            c = ring_idx(k - 1, s + 1)
            d = ring_idx(k - 1, s)
            tris.append((a, b, c))
            tris.append((a, c, d))
    for s in range(n):
        tris.append((ring_idx(1, s), ring_idx(1, s + 1), center))
    loop = list(range(n))
    return TriangleMesh(
        vertices=v,
        triangles=np.asarray(tris),
        boundary_loops=[loop],
        boundary_curves=[curve],
        topology="disk",
        orientable=True,
    )


def _build_annulus(c1: PolylineCurve, c2: PolylineCurve, rows: int) -> TriangleMesh:
    if c1.n_vertices != c2.n_vertices:
        raise MeshError("annulus loops must have equal vertex counts")
    n = c1.n_vertices
    verts = [c1.vertices]
    for r in range(1, rows):
        u = r / rows
        verts.append((1.0 - u) * c1.vertices + u * c2.vertices)
    verts.append(c2.vertices)
    v = np.vstack(verts)

    def idx(r: int, s: int) -> int:
        return r * n + (s % n)

    tris = []
    for r in range(rows):
        for s in range(n):
            a, b = idx(r, s), idx(r, s + 1)
            c, d = idx(r + 1, s + 1), idx(r + 1, s)
            tris.append((a, b, c))
            tris.append((a, c, d))
    loops = [list(range(n)), [rows * n + s for s in range(n)]]
    return TriangleMesh(
        vertices=v,
        triangles=np.asarray(tris),
        boundary_loops=loops,
        boundary_curves=[c1, c2],
        topology="annulus",
        orientable=True,
    )


def _build_moebius(curve: PolylineCurve, rows: int) -> TriangleMesh:
    n = curve.n_vertices
    if n % 2 != 0:
        raise MeshError("moebius band needs an even boundary vertex count")
    h = n // 2
    gamma = curve.vertices
    # rows 0..rows: row 0 is gamma(s), row `rows` is gamma(s+h); interior
    # rows are fresh vertices; the seam s=h reuses column 0 upside down.
    verts = [gamma]  # curve vertices keep their indices 0..n-1
    interior_base = n
    for r in range(1, rows):
        u = r / rows
        verts.append((1.0 - u) * gamma[:h] + u * gamma[h:])
    v = np.vstack(verts)

    def idx(s: int, r: int) -> int:
        if s == h:
            s, r = 0, rows - r
        if r == 0:
            return s
        if r == rows:
            return h + s
        return interior_base + (r - 1) * h + s

    tris = []
    for s in range(h):
        for r in range(rows):
            a, b = idx(s, r), idx(s + 1, r)
            c, d = idx(s + 1, r + 1), idx(s, r + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    loop = list(range(n))
    orientable, _, conflicts = try_orient(np.asarray(tris))
    if orientable:
        raise MeshError("moebius construction unexpectedly orientable")
    return TriangleMesh(
        vertices=v,
        triangles=np.asarray(tris),
        boundary_loops=[loop],
        boundary_curves=[curve],
        topology="moebius",
        orientable=False,
        nonorientable_witness=conflicts,
    )

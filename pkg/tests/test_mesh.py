"""Mesh construction, validation, orientability, densities, and IO."""

from __future__ import annotations

import numpy as np
import pytest

from curvelab import curve as cv
from curvelab import generators as gen
from curvelab import plateau as pl
from curvelab.errors import MeshError
from curvelab.plateau.mesh import boundary_edges, try_orient

from conftest import square_grid_mesh


def test_disk_mesh_boundary_is_the_curve():
    c = gen.circle(48)
    m = pl.build_initial_mesh(c, "disk", 8)
    assert m.topology == "disk" and m.orientable
    assert np.array_equal(m.vertices[m.boundary_loops[0]], c.vertices)
    assert len(m.nonorientable_witness) == 0


def test_annulus_mesh():
    c1, c2 = gen.circle_pair(1.0, 1.0, 0.5, n=32)
    m = pl.build_initial_mesh([c1, c2], "annulus", 6)
    assert len(m.boundary_loops) == 2
    assert np.array_equal(m.vertices[m.boundary_loops[0]], c1.vertices)
    assert np.array_equal(m.vertices[m.boundary_loops[1]], c2.vertices)


def test_annulus_needs_matching_counts():
    c1 = gen.circle(32)
    c2 = gen.circle(48, center=(0, 0, 1.0))
    with pytest.raises(MeshError):
        pl.build_initial_mesh([c1, c2], "annulus", 6)


def test_moebius_mesh_nonorientable_with_witness():
    c = gen.moebius_boundary(12, 0.1, 0.01)
    m = pl.build_initial_mesh(c, "moebius", 8)
    assert not m.orientable
    assert len(m.nonorientable_witness) > 0
    orientable, _, conflicts = try_orient(m.triangles)
    assert not orientable and conflicts
    # the single boundary loop is the full curve
    assert np.array_equal(m.vertices[m.boundary_loops[0]], c.vertices)


def test_moebius_needs_even_count():
    c = gen.circle(15)
    with pytest.raises(MeshError):
        pl.build_initial_mesh(c, "moebius", 6)


def test_loop_count_mismatch():
    c = gen.circle(16)
    with pytest.raises(MeshError):
        pl.build_initial_mesh([c, c], "disk", 4)
    with pytest.raises(MeshError):
        pl.build_initial_mesh(c, "annulus", 4)


def test_cylinder_band_is_orientable():
    c1, c2 = gen.circle_pair(1.0, 1.0, 0.3, n=24)
    m = pl.build_initial_mesh([c1, c2], "annulus", 4)
    orientable, signs, conflicts = try_orient(m.triangles)
    assert orientable and not conflicts
    assert set(np.unique(signs)) <= {-1, 1}


def test_degenerate_triangle_rejected():
    verts = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]], dtype=float)
    tris = np.array([[0, 1, 2], [0, 2, 3]])  # first one collinear
    loop = [0, 1, 2, 3]
    curve = cv.PolylineCurve(dim=3, vertices=verts[loop], closed=True)
    with pytest.raises(MeshError):
        pl.TriangleMesh(
            vertices=verts, triangles=tris, boundary_loops=[loop],
            boundary_curves=[curve], topology="disk", orientable=True,
        )


def test_boundary_loop_mismatch_rejected():
    m = square_grid_mesh(3)
    wrong = list(m.boundary_loops[0])
    wrong[0], wrong[1] = wrong[1], wrong[0]
    curve = cv.PolylineCurve(dim=3, vertices=m.vertices[wrong], closed=True)
    with pytest.raises(MeshError):
        pl.TriangleMesh(
            vertices=m.vertices, triangles=m.triangles, boundary_loops=[wrong],
            boundary_curves=[curve], topology="disk", orientable=True,
        )


def test_pinned_positions_must_match_exactly():
    m = square_grid_mesh(3)
    shifted = cv.PolylineCurve(
        dim=3, vertices=m.boundary_curves[0].vertices + 1e-9, closed=True
    )
    with pytest.raises(MeshError):
        pl.TriangleMesh(
            vertices=m.vertices, triangles=m.triangles,
            boundary_loops=m.boundary_loops, boundary_curves=[shifted],
            topology="disk", orientable=True,
        )


def test_boundary_edges_exactness():
    m = square_grid_mesh(4)
    edges = boundary_edges(m.triangles)
    assert len(edges) == 16  # 4 sides x 4 segments


def test_vertex_density_flat_cases():
    m = square_grid_mesh(8)
    k = 8
    interior = 4 * (k + 1) + 4
    edge_mid = 4
    corner = 0
    assert pl.vertex_density(m, interior) == pytest.approx(1.0, abs=1e-12)
    assert pl.vertex_density(m, edge_mid) == pytest.approx(0.5, abs=1e-12)
    assert pl.vertex_density(m, corner) == pytest.approx(0.25, abs=1e-12)


def test_interior_angle_defects_flat():
    m = square_grid_mesh(6)
    assert np.max(np.abs(pl.interior_angle_defects(m))) < 1e-12


def test_surface_area_two_triangle_square():
    verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float)
    tris = np.array([[0, 1, 2], [0, 2, 3]])
    loop = [0, 1, 2, 3]
    curve = cv.PolylineCurve(dim=3, vertices=verts[loop], closed=True)
    m = pl.TriangleMesh(
        vertices=verts, triangles=tris, boundary_loops=[loop],
        boundary_curves=[curve], topology="disk", orientable=True,
    )
    assert pl.surface_area(m) == pytest.approx(1.0, abs=1e-15)


def test_obj_round_trip(tmp_path):
    c = gen.moebius_boundary(12, 0.1, 0.01)
    m = pl.build_initial_mesh(c, "moebius", 6)
    path = tmp_path / "band.obj"
    pl.save_mesh(m, path)
    back = pl.load_mesh(path)
    assert np.array_equal(back.vertices, m.vertices)
    assert np.array_equal(back.triangles, m.triangles)
    assert back.topology == "moebius" and not back.orientable
    assert back.boundary_loops == m.boundary_loops


def test_missing_sidecar(tmp_path):
    c = gen.circle(24)
    m = pl.build_initial_mesh(c, "disk", 4)
    path = tmp_path / "d.obj"
    pl.save_mesh(m, path)
    (tmp_path / "d.obj.json").unlink()
    with pytest.raises(MeshError):
        pl.load_mesh(path)

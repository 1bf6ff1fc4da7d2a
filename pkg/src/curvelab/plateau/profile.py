"""Extended density profiles: surface plus exterior cone, per radius."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..curve import PolylineCurve
from ..projcone import exterior_cone_area_in_ball
from .ball import area_in_ball
from .mesh import TriangleMesh


@dataclass(frozen=True)
class DensityProfile:
    """Sampled r -> density of (surface union exterior cone) in B(p, r)."""

    p: np.ndarray
    radii: np.ndarray
    theta_surface: np.ndarray
    theta_cone: np.ndarray
    theta_total: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=np.float64)
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be positive and strictly increasing")
        if np.any(np.asarray(self.theta_surface) < 0) or np.any(np.asarray(self.theta_cone) < 0):
            raise ValueError("density components must be nonnegative")
        total = np.asarray(self.theta_surface) + np.asarray(self.theta_cone)
        if np.max(np.abs(total - np.asarray(self.theta_total))) > 1e-12:
            raise ValueError("theta_total must equal theta_surface + theta_cone")

    def min_successive_difference(self) -> float:
        return float(np.min(np.diff(self.theta_total)))


def extended_density_profile(
    mesh: TriangleMesh,
    p,
    radii,
    curves: list[PolylineCurve] | None = None,
) -> DensityProfile:
    """Density of the surface plus the exterior cones over its boundary.

    curves defaults to the mesh's pinned boundary curves; the cone part
    sums over all loops.
    """
    p = np.asarray(p, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    if curves is None:
        curves = mesh.boundary_curves
    theta_s = np.empty(len(radii))
    theta_c = np.empty(len(radii))
    for k, r in enumerate(radii):
        denom = np.pi * r * r
        theta_s[k] = area_in_ball(mesh, p, float(r)) / denom
        theta_c[k] = sum(exterior_cone_area_in_ball(c, p, float(r)) for c in curves) / denom
    return DensityProfile(
        p=p, radii=radii, theta_surface=theta_s, theta_cone=theta_c,
        theta_total=theta_s + theta_c,
    )


def planarity_residual(mesh: TriangleMesh) -> float:
    """Relative deviation of the vertex cloud from its best-fit plane."""
    v = mesh.vertices - np.mean(mesh.vertices, axis=0)
    s = np.linalg.svd(v, compute_uv=False)
    if len(s) < 3 or s[0] == 0.0:
        return 0.0
    return float(s[2] / s[0])


def coneness_residual(mesh: TriangleMesh, p) -> float:
    """How far the mesh is from being a cone with vertex p.

    Zero when every triangle's plane passes through p; measured as the max
    distance from p to a triangle plane, relative to mesh scale.
    """
    p = np.asarray(p, dtype=np.float64)
    tri = mesh.triangle_coords()
    if mesh.dim != 3:
        raise ValueError("coneness residual is implemented for meshes in R^3")
    n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    lens = np.linalg.norm(n, axis=1)
    ok = lens > 0
    d = np.abs(np.einsum("ij,ij->i", n[ok] / lens[ok][:, None], p - tri[ok, 0]))
    if not np.any(ok):
        return 0.0
    return float(np.max(d) / max(mesh.scale, 1e-300))


def is_cone_like(mesh: TriangleMesh, p, tol: float = 1e-6) -> bool:
    return coneness_residual(mesh, p) < tol

"""Discrete Plateau solver, ball-clipped areas, density profiles, and
mesh self-intersection testing."""

from .ball import area_in_ball, area_in_ball_with_error, density_ratio
from .intersect import SelfIntersectionReport, self_intersection_report
from .mesh import (
    TriangleMesh,
    build_initial_mesh,
    interior_angle_defects,
    surface_area,
    try_orient,
    vertex_density,
)
from .meshio import load_mesh, save_mesh
from .profile import (
    DensityProfile,
    coneness_residual,
    extended_density_profile,
    is_cone_like,
    planarity_residual,
)
from .solver import ConvergenceReport, SolverParams, area_gradient, minimize_area

__all__ = [
    "TriangleMesh",
    "build_initial_mesh",
    "surface_area",
    "vertex_density",
    "interior_angle_defects",
    "try_orient",
    "area_in_ball",
    "area_in_ball_with_error",
    "density_ratio",
    "extended_density_profile",
    "DensityProfile",
    "planarity_residual",
    "coneness_residual",
    "is_cone_like",
    "SolverParams",
    "ConvergenceReport",
    "minimize_area",
    "area_gradient",
    "self_intersection_report",
    "SelfIntersectionReport",
    "load_mesh",
    "save_mesh",
]

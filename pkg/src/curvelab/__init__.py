"""curvelab: polygonal space curves, radial projections, integral-geometric
estimators, and discrete minimal surfaces, with theorem-level diagnostics."""

from . import curve, diagnostics, generators, intgeom, plateau, projcone
from .curve import PolylineCurve, total_curvature
from .plateau import TriangleMesh, build_initial_mesh, minimize_area

__version__ = "0.1.0"

__all__ = [
    "curve",
    "generators",
    "intgeom",
    "projcone",
    "plateau",
    "diagnostics",
    "PolylineCurve",
    "TriangleMesh",
    "total_curvature",
    "build_initial_mesh",
    "minimize_area",
    "__version__",
]

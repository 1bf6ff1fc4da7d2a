"""Exception types shared across the package."""


class CurveLabError(Exception):
    """Base class for package-specific errors."""


class InvalidCurveError(CurveLabError, ValueError):
    """Curve violates a construction invariant (too few vertices, zero edge, NaN)."""


class NoExteriorAngleError(CurveLabError, ValueError):
    """Exterior angle requested at an endpoint of an open curve."""


class DegenerateChordError(CurveLabError, ValueError):
    """Chord between coincident curve points."""


class IndexOrderError(CurveLabError, ValueError):
    """Vertex indices violate the required parameter order."""


class RefinementError(CurveLabError, RuntimeError):
    """Dyadic refinement failed to converge within the doubling budget."""


class DegenerateDirectionError(CurveLabError):
    """Direction is non-generic for the curve; caller should resample."""


class PathologicalCurveError(CurveLabError, RuntimeError):
    """Degenerate-direction rate exceeded the estimator's rejection budget."""


class BasePointOnCurveError(CurveLabError, ValueError):
    """Estimator base point lies on the curve."""


class ProjectionUndefinedError(CurveLabError, ValueError):
    """Radial projection center lies on the curve."""


class MeshError(CurveLabError, ValueError):
    """Triangle mesh violates a construction invariant."""


class SolverDegenerateError(CurveLabError, RuntimeError):
    """Area minimization hit an unrecoverable degenerate configuration."""

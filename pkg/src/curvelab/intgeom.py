"""Monte-Carlo integral geometry on polygonal curves.

Two estimators share one sampling scheme: total curvature is pi times the
mean number of local extrema of the linear height function over random
directions, and the spherically projected length is pi times the mean
number of its zeros. Directions that are non-generic for the curve (a tie
between adjacent vertex heights, or a vertex exactly on the zero plane)
are rejected and redrawn, never perturbed, so every count is an exact
integer; the rejection rate is part of the report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import PolylineCurve
from .errors import BasePointOnCurveError, DegenerateDirectionError, PathologicalCurveError
from .vecmath import point_segment_distance

# Scale-invariant tie tolerance: adjacent height values closer than this
# fraction of the largest height magnitude make a direction non-generic.
TIE_TOL = 1e-12

# A run is pathological when more than this fraction of draws is rejected.
MAX_REJECT_FRACTION = 0.01

_CHUNK = 8192


@dataclass(frozen=True)
class DirectionSample:
    """Reproducible batch of uniform unit vectors."""

    directions: np.ndarray
    seed: int
    count: int

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=np.float64)
        if d.ndim != 2 or len(d) != self.count:
            raise ValueError("directions must be (count, dim)")
        norms = np.linalg.norm(d, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("directions must be unit vectors")


@dataclass(frozen=True)
class EstimateReport:
    """Monte-Carlo estimate with enough metadata to reproduce it exactly."""

    mean: float
    std_error: float
    count: int
    seed: int
    rejected: int

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "count": self.count,
            "seed": self.seed,
            "rejected": self.rejected,
        }


def sample_directions(dim: int, n: int, seed: int) -> DirectionSample:
    """n i.i.d. uniform unit vectors in R^dim via normalized Gaussians."""
    if n < 1 or dim < 2:
        raise ValueError("need n >= 1 and dim >= 2")
    rng = np.random.default_rng(seed)
    d = _draw_unit(rng, n, dim)
    return DirectionSample(directions=d, seed=seed, count=n)


def _draw_unit(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    d = rng.standard_normal((n, dim))
    norms = np.linalg.norm(d, axis=1)
    while np.any(norms == 0.0):  # pragma: no cover - probability zero
        bad = norms == 0.0
        d[bad] = rng.standard_normal((int(np.sum(bad)), dim))
        norms = np.linalg.norm(d, axis=1)
    return d / norms[:, None]


def _extrema_counts(values: np.ndarray, closed: bool) -> tuple[np.ndarray, np.ndarray]:
    """Counts of strict local extrema per row of height values (k, m).

    Returns (counts, degenerate_mask); counts are meaningless where the
    mask is set (adjacent tie within tolerance).
    """
    f = np.asarray(values, dtype=np.float64)
    scale = np.max(np.abs(f), axis=1)
    tol = TIE_TOL * np.where(scale > 0, scale, 1.0)
    if closed:
        df = np.roll(f, -1, axis=1) - f
        degen = np.min(np.abs(df), axis=1) <= tol
        s = np.sign(df)
        counts = np.count_nonzero(s != np.roll(s, 1, axis=1), axis=1)
    else:
        df = f[:, 1:] - f[:, :-1]
        degen = np.min(np.abs(df), axis=1) <= tol
        s = np.sign(df)
        interior = np.count_nonzero(s[:, 1:] != s[:, :-1], axis=1)
        counts = interior + 2  # endpoints are always one-sided extrema
    return counts.astype(np.int64), degen


def _zero_counts(values: np.ndarray, closed: bool) -> tuple[np.ndarray, np.ndarray]:
    """Counts of sign changes per row; degenerate when a value sits on zero."""
    f = np.asarray(values, dtype=np.float64)
    scale = np.max(np.abs(f), axis=1)
    tol = TIE_TOL * np.where(scale > 0, scale, 1.0)
    degen = np.min(np.abs(f), axis=1) <= tol
    s = np.sign(f)
    if closed:
        changes = np.count_nonzero(s != np.roll(s, 1, axis=1), axis=1)
    else:
        changes = np.count_nonzero(s[:, 1:] != s[:, :-1], axis=1)
    return changes.astype(np.int64), degen


def count_local_extrema(curve: PolylineCurve, v: np.ndarray) -> int:
    """Strict local extrema of x -> v.x along the (cyclic) vertex sequence."""
    v = np.asarray(v, dtype=np.float64)
    f = (curve.vertices @ v)[None, :]
    counts, degen = _extrema_counts(f, curve.closed)
    if degen[0]:
        raise DegenerateDirectionError("direction is non-generic for this curve")
    return int(counts[0])


def count_zeros(curve: PolylineCurve, v: np.ndarray, p: np.ndarray) -> int:
    """Sign changes of x -> v.(x - p) along the (cyclic) vertex sequence."""
    v = np.asarray(v, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    f = ((curve.vertices - p) @ v)[None, :]
    counts, degen = _zero_counts(f, curve.closed)
    if degen[0]:
        raise DegenerateDirectionError("a vertex lies on the zero plane")
    return int(counts[0])


def injection_check(curve: PolylineCurve, v: np.ndarray, p: np.ndarray) -> bool:
    """Zeros never outnumber local extrema for a generic direction."""
    return count_zeros(curve, v, p) <= count_local_extrema(curve, v)


def _check_base_point(curve: PolylineCurve, p: np.ndarray) -> None:
    from .curve import diameter  # local import to keep module load cheap

    p = np.asarray(p, dtype=np.float64)
    verts = curve.vertices
    tol = 1e-12 * max(diameter(curve), 1e-300)
    a = verts if curve.closed else verts[:-1]
    b = np.roll(verts, -1, axis=0) if curve.closed else verts[1:]
    if np.min(point_segment_distance(p, a, b)) <= tol:
        raise BasePointOnCurveError("base point lies on the curve")


def _estimate(
    curve: PolylineCurve,
    n: int,
    seed: int,
    counter,
) -> EstimateReport:
    """Accept n generic directions, rejecting and redrawing degenerate ones."""
    if n < 1:
        raise ValueError("need at least one direction")
    rng = np.random.default_rng(seed)
    accepted = np.empty(n, dtype=np.int64)
    got = 0
    rejected = 0
    drawn = 0
    while got < n:
        k = min(_CHUNK, max(n - got, 256))
        d = _draw_unit(rng, k, curve.dim)
        counts, degen = counter(d)
        drawn += k
        rejected += int(np.sum(degen))
        good = counts[~degen]
        take = min(len(good), n - got)
        accepted[got : got + take] = good[:take]
        got += take
        if drawn >= 4 * n and rejected > MAX_REJECT_FRACTION * drawn:
            raise PathologicalCurveError(
                f"degenerate-direction rate {rejected}/{drawn} exceeds budget"
            )
    if rejected > MAX_REJECT_FRACTION * max(drawn, n):
        raise PathologicalCurveError(f"degenerate-direction rate {rejected}/{drawn} exceeds budget")
    mean = np.pi * float(np.mean(accepted))
    var = float(np.var(accepted, ddof=1)) if n > 1 else 0.0
    std_error = np.pi * float(np.sqrt(var / n))
    return EstimateReport(mean=mean, std_error=std_error, count=n, seed=seed, rejected=rejected)


def milnor_total_curvature(curve: PolylineCurve, n: int, seed: int) -> EstimateReport:
    """Total curvature as pi times the mean local-extrema count."""
    if not curve.closed:
        raise ValueError("the extrema average applies to closed curves")
    verts = curve.vertices

    def counter(d: np.ndarray):
        return _extrema_counts(d @ verts.T, closed=True)

    return _estimate(curve, n, seed, counter)


def crofton_projected_length(
    curve: PolylineCurve, p: np.ndarray, n: int, seed: int
) -> EstimateReport:
    """Length of the radial projection about p as pi times the mean zero count."""
    p = np.asarray(p, dtype=np.float64)
    _check_base_point(curve, p)
    shifted = curve.vertices - p

    def counter(d: np.ndarray):
        return _zero_counts(d @ shifted.T, closed=curve.closed)

    return _estimate(curve, n, seed, counter)

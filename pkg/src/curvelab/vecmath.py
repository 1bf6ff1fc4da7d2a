"""Low-level vector helpers used by every geometry module.

All functions accept plain ndarrays in R^N and are shape-polymorphic where
noted: a trailing axis of length N holds coordinates, leading axes broadcast.
"""

from __future__ import annotations

import numpy as np

EPS = 1e-12


def unit(v: np.ndarray) -> np.ndarray:
    """Normalize vectors along the last axis. Raises on zero vectors."""
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0.0):
        raise ValueError("cannot normalize zero vector")
    return v / n


def vector_angle(u: np.ndarray, v: np.ndarray) -> np.ndarray | float:
    """Angle in [0, pi] between vectors, stable near 0 and pi.

    Uses 2*atan2(|u^ - v^|, |u^ + v^|) on normalized inputs, which is the
    atan2(cross, dot) evaluation rearranged so no cancellation occurs at
    either end of the range, and which works in any ambient dimension.
    """
    uh = unit(u)
    vh = unit(v)
    d = np.linalg.norm(uh - vh, axis=-1)
    s = np.linalg.norm(uh + vh, axis=-1)
    ang = 2.0 * np.arctan2(d, s)
    if ang.ndim == 0:
        return float(ang)
    return ang


def pairwise_diameter(points: np.ndarray) -> float:
    """Max pairwise distance. O(n^2) memory-chunked; fine at desk scale."""
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    if n < 2:
        return 0.0
    best = 0.0
    step = max(1, int(2e7) // max(n, 1))
    for lo in range(0, n, step):
        block = pts[lo : lo + step]
        d2 = np.sum((block[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
        best = max(best, float(np.max(d2)))
    return float(np.sqrt(best))


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray | float:
    """Distance from point p to segments [a, b]; a and b broadcast over rows."""
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ab = b - a
    ap = p - a
    denom = np.sum(ab * ab, axis=-1)
    t = np.where(denom > 0.0, np.sum(ap * ab, axis=-1) / np.where(denom > 0.0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[..., None] * ab
    d = np.linalg.norm(p - closest, axis=-1)
    if d.ndim == 0:
        return float(d)
    return d


def segment_segment_distance(
    p1: np.ndarray, q1: np.ndarray, p2: np.ndarray, q2: np.ndarray
) -> np.ndarray:
    """Min distance between segment batches [p1,q1] and [p2,q2] (rowwise).

    Clamped closest-point computation; robust for parallel and degenerate
    segments (falls back to endpoint projections).
    """
    p1 = np.atleast_2d(np.asarray(p1, dtype=np.float64))
    q1 = np.atleast_2d(np.asarray(q1, dtype=np.float64))
    p2 = np.atleast_2d(np.asarray(p2, dtype=np.float64))
    q2 = np.atleast_2d(np.asarray(q2, dtype=np.float64))
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    denom = a * e - b * b
    # interior candidate for s, guarded against parallel (denom ~ 0)
    s = np.where(denom > EPS * np.maximum(a * e, 1e-300), (b * f - c * e), 0.0)
    s = s / np.where(denom > 0.0, denom, 1.0)
    s = np.clip(s, 0.0, 1.0)
    t = np.where(e > 0.0, (b * s + f) / np.where(e > 0.0, e, 1.0), 0.0)
    # re-clamp s for clamped t
    t_cl = np.clip(t, 0.0, 1.0)
    s = np.where(a > 0.0, (b * t_cl - c) / np.where(a > 0.0, a, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    t = np.where(e > 0.0, (b * s + f) / np.where(e > 0.0, e, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    c1 = p1 + s[..., None] * d1
    c2 = p2 + t[..., None] * d2
    return np.linalg.norm(c1 - c2, axis=-1)


def triangle_areas(verts: np.ndarray) -> np.ndarray:
    """Areas of triangles given as (..., 3, dim) stacks; valid in any dimension."""
    v = np.asarray(verts, dtype=np.float64)
    e1 = v[..., 1, :] - v[..., 0, :]
    e2 = v[..., 2, :] - v[..., 0, :]
    g11 = np.sum(e1 * e1, axis=-1)
    g22 = np.sum(e2 * e2, axis=-1)
    g12 = np.sum(e1 * e2, axis=-1)
    gram = np.maximum(g11 * g22 - g12 * g12, 0.0)
    return 0.5 * np.sqrt(gram)


def orthonormal_plane_basis(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis (e1, e2) of span{u, v} with e1 along u.

    Raises if u and v are parallel (span is not 2-dimensional).
    """
    e1 = unit(np.asarray(u, dtype=np.float64))
    v = np.asarray(v, dtype=np.float64)
    w = v - np.dot(v, e1) * e1
    nw = np.linalg.norm(w)
    if nw <= EPS * max(np.linalg.norm(v), 1.0):
        raise ValueError("vectors are parallel; plane basis undefined")
    return e1, w / nw

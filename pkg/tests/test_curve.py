"""Curve module: total curvature, exterior angles, chord bounds."""

from __future__ import annotations

import json

import numpy as np
import pytest

from curvelab import curve as cv
from curvelab import generators as gen
from curvelab.errors import (
    DegenerateChordError,
    IndexOrderError,
    InvalidCurveError,
    NoExteriorAngleError,
)

from conftest import closed_corpus
from oracles import circle_arc_chord_ratio, mc_mean_abs_projection

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi


# -- construction invariants --------------------------------------------------


def test_closed_needs_three_vertices():
    with pytest.raises(InvalidCurveError):
        cv.make_curve([[0, 0, 0], [1, 0, 0]], closed=True)


def test_open_needs_two_vertices():
    with pytest.raises(InvalidCurveError):
        cv.make_curve([[0, 0, 0]], closed=False)


def test_duplicate_consecutive_vertices_rejected():
    with pytest.raises(InvalidCurveError):
        cv.make_curve([[0, 0, 0], [0, 0, 0], [1, 0, 0]], closed=True)


def test_duplicate_wraparound_rejected():
    with pytest.raises(InvalidCurveError):
        cv.make_curve([[0, 0, 0], [1, 0, 0], [0, 0, 0]], closed=True)


def test_nan_rejected():
    with pytest.raises(InvalidCurveError):
        cv.make_curve([[0, 0, 0], [np.nan, 0, 0], [1, 1, 0]], closed=True)


def test_merge_close_collapses_near_duplicates():
    pts = [[0, 0, 0], [1, 0, 0], [1 + 1e-15, 0, 0], [1, 1, 0]]
    c = cv.make_curve(pts, closed=True, merge_close=True)
    assert c.n_vertices == 3


def test_vertices_read_only():
    c = gen.circle(16)
    with pytest.raises(ValueError):
        c.vertices[0, 0] = 5.0


# -- total curvature -----------------------------------------------------------


def test_convex_polygons_give_exactly_two_pi():
    for n in (3, 4, 7, 12, 33):
        poly = gen.convex_polygon(n)
        assert cv.total_curvature(poly) == pytest.approx(TWO_PI, abs=1e-9)


def test_inscribed_polygons_increase_to_two_pi():
    values = [cv.total_curvature(gen.circle(n)) for n in (8, 16, 32, 64, 128)]
    assert all(v <= TWO_PI + 1e-12 for v in values)
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(TWO_PI, abs=1e-3)


def test_trefoil_exceeds_four_pi():
    tc = cv.total_curvature(gen.torus_knot(2, 3, 512))
    assert tc > FOUR_PI


def test_total_curvature_open_excludes_endpoints():
    c = cv.make_curve([[0, 0, 0], [1, 0, 0], [1, 1, 0]], closed=False)
    assert cv.total_curvature(c) == pytest.approx(np.pi / 2, abs=1e-12)


def test_monotone_under_on_chord_insertion():
    rng = np.random.default_rng(5)
    for name, c in closed_corpus().items():
        before = cv.total_curvature(c)
        edge = int(rng.integers(0, c.n_vertices))
        t = float(rng.uniform(0.2, 0.8))
        a = c.vertices[edge]
        b = c.vertices[(edge + 1) % c.n_vertices]
        new = np.insert(c.vertices, edge + 1, a + t * (b - a), axis=0)
        after = cv.total_curvature(cv.make_curve(new, closed=True))
        assert after >= before - 1e-9, name


def test_fenchel_over_corpus():
    for name, c in closed_corpus().items():
        assert cv.total_curvature(c) >= TWO_PI - 1e-9, name


# -- exterior angles and tangents ----------------------------------------------


def test_square_corner_angle():
    sq = gen.convex_polygon(4)
    for i in range(4):
        assert cv.exterior_angle(sq, i) == pytest.approx(np.pi / 2, abs=1e-12)


def test_collinear_vertex_angle_zero():
    c = cv.make_curve([[0, 0, 0], [1, 0, 0], [2, 0, 0], [2, 1, 0]], closed=False)
    assert cv.exterior_angle(c, 1) == pytest.approx(0.0, abs=1e-12)


def test_doubled_back_vertex_approaches_pi():
    eps = 1e-6
    c = cv.make_curve([[0, 0, 0], [1, 0, 0], [eps, eps, 0]], closed=False)
    assert cv.exterior_angle(c, 1) > np.pi - 1e-2


def test_endpoint_has_no_exterior_angle():
    c = cv.make_curve([[0, 0, 0], [1, 0, 0], [1, 1, 0]], closed=False)
    with pytest.raises(NoExteriorAngleError):
        cv.exterior_angle(c, 0)
    with pytest.raises(NoExteriorAngleError):
        cv.one_sided_tangents(c, 2)


def test_exterior_angle_rigid_motion_and_scale_invariant():
    c = gen.random_trig_curve(9, n=64)
    rng = np.random.default_rng(2)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    shift = rng.standard_normal(3)
    scale = 3.7
    moved = cv.PolylineCurve(dim=3, vertices=scale * (c.vertices @ q.T) + shift, closed=True)
    for i in range(0, c.n_vertices, 7):
        assert cv.exterior_angle(moved, i) == pytest.approx(
            cv.exterior_angle(c, i), abs=1e-12
        )


def test_one_sided_tangents_square_corner():
    sq = cv.make_curve([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], closed=True)
    pair = cv.one_sided_tangents(sq, 1)
    assert np.allclose(pair.t_minus, [1, 0, 0], atol=1e-12)
    assert np.allclose(pair.t_plus, [0, 1, 0], atol=1e-12)


def test_straight_vertex_tangents_agree():
    c = cv.make_curve([[0, 0, 0], [1, 0, 0], [2, 0, 0]], closed=False)
    pair = cv.one_sided_tangents(c, 1)
    assert np.allclose(pair.t_plus, pair.t_minus, atol=1e-12)


def test_tangent_refinement_converges_linearly():
    def sampler(n):
        t = TWO_PI * np.arange(n) / n
        return np.stack([np.cos(t), np.sin(t), np.zeros(n)], axis=1)

    # analytic tangent at parameter 0 is (0, 1, 0)
    errors = []
    for n in (32, 64, 128, 256):
        c = cv.make_curve(sampler(n), closed=True)
        pair = cv.one_sided_tangents(c, 0)
        errors.append(np.linalg.norm(pair.t_plus - np.array([0.0, 1.0, 0.0])))
    for n, e in zip((32, 64, 128, 256), errors):
        assert e <= 1.1 * np.pi / n  # chord deviates by half the arc step
    assert errors[-1] < errors[0] / 4


# -- chords ---------------------------------------------------------------------


def test_chord_direction_unit_segment():
    c = cv.make_curve([[0, 0, 0], [1, 0, 0]], closed=False)
    assert np.allclose(cv.chord_direction(c, 0, 1), [1, 0, 0], atol=1e-12)


def test_chord_direction_antipodal():
    c = cv.make_curve([[1, 0], [0, 1], [-1, 0], [0, -1]], closed=True)
    assert np.allclose(cv.chord_direction(c, 0, 2), [-1, 0], atol=1e-12)


def test_chord_direction_coincident_raises():
    c = gen.doubled_circle(16, 0.0)
    with pytest.raises(DegenerateChordError):
        cv.chord_direction(c, 0, 16)  # same point on the second pass


def test_chord_direction_order():
    c = gen.circle(16)
    with pytest.raises(IndexOrderError):
        cv.chord_direction(c, 5, 5)


def test_convex_polygon_chord_angles_below_arc_curvature():
    poly = gen.convex_polygon(10)
    n = poly.n_vertices
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                a = cv.chord_direction(poly, i, j)
                b = cv.chord_direction(poly, j, k)
                from curvelab.vecmath import vector_angle

                sub = cv.PolylineCurve(dim=3, vertices=poly.vertices[i : k + 1], closed=False)
                assert vector_angle(a, b) <= cv.total_curvature(sub) + 1e-9


def test_chord_angle_bound_straight_polyline():
    c = cv.make_curve([[x, 0, 0] for x in range(6)], closed=False)
    res = cv.chord_angle_bound_check(c, 0, 2, 3, 5)
    assert res.holds
    assert res.angle == pytest.approx(0.0, abs=1e-12)
    assert res.slack == pytest.approx(0.0, abs=1e-12)


def test_chord_angle_bound_quarter_circle_exhaustive():
    n = 64
    t = (np.pi / 2) * np.arange(n) / (n - 1)
    c = cv.make_curve(np.stack([np.cos(t), np.sin(t), np.zeros(n)], axis=1), closed=False)
    rng = np.random.default_rng(0)
    quads = set()
    while len(quads) < 500:
        a, x, y, b = sorted(rng.integers(0, n, size=4))
        if a < x <= y < b:
            quads.add((a, x, y, b))
    for a, x, y, b in quads:
        res = cv.chord_angle_bound_check(c, a, x, y, b)
        assert res.slack >= -1e-9


def test_chord_angle_bound_random_curves():
    rng = np.random.default_rng(17)
    for seed in (1, 2, 3):
        c = gen.random_trig_curve(seed, n=96)
        n = c.n_vertices
        checked = 0
        while checked < 3000:
            a, x, y, b = sorted(rng.integers(0, n, size=4))
            if not (a < x <= y < b):
                continue
            res = cv.chord_angle_bound_check(c, a, x, y, b)
            assert res.slack >= -1e-9
            checked += 1


def test_chord_angle_bound_order_error():
    c = gen.circle(16)
    with pytest.raises(IndexOrderError):
        cv.chord_angle_bound_check(c, 3, 2, 5, 8)


def test_chord_length_bound_straight():
    c = cv.make_curve([[x, 0, 0] for x in range(5)], closed=False)
    res = cv.chord_length_bound_check(c, 0, 4)
    assert res.applicable and res.holds
    assert res.ratio == pytest.approx(1.0, abs=1e-12)
    assert res.bound == pytest.approx(1.0, abs=1e-12)


def test_chord_length_bound_shallow_arc():
    turning = 0.3
    n = 40
    t = turning * np.arange(n) / (n - 1)
    c = cv.make_curve(np.stack([np.sin(t), 1 - np.cos(t), np.zeros(n)], axis=1), closed=False)
    res = cv.chord_length_bound_check(c, 0, n - 1)
    assert res.applicable and res.holds
    # polygonal ratio sits below the smooth arc ratio, and the inscribed
    # turning sits below 0.3, so the smooth-arc bound caps everything
    assert res.ratio <= circle_arc_chord_ratio(turning) + 1e-12
    assert res.ratio <= 1.0 / np.cos(2 * turning)
    assert res.bound <= 1.0 / np.cos(2 * turning) + 1e-12


def test_chord_length_bound_inapplicable_beyond_quarter_pi():
    turning = np.pi / 3
    n = 40
    t = turning * np.arange(n) / (n - 1)
    c = cv.make_curve(np.stack([np.sin(t), 1 - np.cos(t), np.zeros(n)], axis=1), closed=False)
    res = cv.chord_length_bound_check(c, 0, n - 1)
    assert not res.applicable


# -- lengths, diameters, ratios --------------------------------------------------


def test_square_length_and_diameter():
    sq = cv.make_curve([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], closed=True)
    assert cv.arclength(sq) == pytest.approx(4.0, abs=1e-12)
    assert cv.diameter(sq) == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_circle_length_matches_inscribed_formula():
    n = 4096
    c = gen.circle(n)
    assert cv.arclength(c) == pytest.approx(2 * n * np.sin(np.pi / n), rel=1e-12)
    assert cv.arclength(c) == pytest.approx(TWO_PI, abs=1e-5)


def test_two_point_open_curve():
    c = cv.make_curve([[0, 0, 0], [3, 4, 0]], closed=False)
    assert cv.arclength(c) == pytest.approx(5.0, abs=1e-12)
    assert cv.diameter(c) == pytest.approx(5.0, abs=1e-12)


def test_rectifiability_ratio_circle():
    c = gen.circle(512)
    assert cv.rectifiability_ratio(c) == pytest.approx(2.0, abs=1e-3)


def test_rectifiability_ratio_doubled_circle_limit():
    for eps in (0.02, 0.01, 0.005):
        c = gen.doubled_circle(128, eps)
        assert cv.rectifiability_ratio(c) == pytest.approx(2.0, abs=0.1)


def test_rectifiability_ratio_floor_over_random_curves():
    # the direction-averaging constant E|u.t| = 1/2 in R^3 is the floor
    est = mc_mean_abs_projection(3, 200000, 123)
    assert est == pytest.approx(0.5, abs=0.005)
    rng = np.random.default_rng(99)
    worst = np.inf
    for _ in range(200):
        seed = int(rng.integers(0, 2**31))
        c = gen.random_trig_curve(seed, harmonics=int(rng.integers(1, 5)), n=64)
        worst = min(worst, cv.rectifiability_ratio(c))
    assert worst >= 0.5


def test_rectifiability_requires_closed():
    c = cv.make_curve([[0, 0, 0], [1, 0, 0]], closed=False)
    with pytest.raises(InvalidCurveError):
        cv.rectifiability_ratio(c)


# -- refinement -------------------------------------------------------------------


def _circle_sampler(t):
    ang = TWO_PI * np.asarray(t)
    return np.stack([np.cos(ang), np.sin(ang), np.zeros_like(ang)], axis=1)


def _ellipse_sampler(t):
    ang = TWO_PI * np.asarray(t)
    return np.stack([2 * np.cos(ang), np.sin(ang), np.zeros_like(ang)], axis=1)


def _trefoil_sampler(t):
    ang = TWO_PI * np.asarray(t)
    r = 2.0 + np.cos(3 * ang)
    return np.stack([r * np.cos(2 * ang), r * np.sin(2 * ang), np.sin(3 * ang)], axis=1)


def test_refine_circle_to_tolerance():
    c = cv.refine_to_tolerance(_circle_sampler, 1e-6)
    assert cv.total_curvature(c) == pytest.approx(TWO_PI, abs=1e-6)


def test_refine_ellipse_hits_two_pi():
    c = cv.refine_to_tolerance(_ellipse_sampler, 1e-6)
    assert cv.total_curvature(c) == pytest.approx(TWO_PI, abs=1e-6)


def test_refine_trefoil_stays_knotted():
    c = cv.refine_to_tolerance(_trefoil_sampler, 1e-4)
    assert cv.total_curvature(c) > FOUR_PI


def test_refine_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        cv.refine_to_tolerance(_circle_sampler, 0.0)


# -- JSON round trip ---------------------------------------------------------------


def test_json_round_trip_bitwise(tmp_path):
    c = gen.random_trig_curve(4, n=48)
    path = tmp_path / "c.json"
    cv.save_curve(c, path)
    back = cv.load_curve(path)
    assert np.array_equal(back.vertices, c.vertices)
    assert back.closed == c.closed and back.dim == c.dim


def test_json_rejects_nonfinite(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 3, "closed": True,
                                "vertices": [[0, 0, 0], [1, 0, float("inf")], [0, 1, 0]]})
                    .replace("Infinity", "1e999"))
    with pytest.raises(InvalidCurveError):
        cv.load_curve(path)


def test_json_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 3}')
    with pytest.raises(InvalidCurveError):
        cv.load_curve(path)

import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from circlereeb.errors import IdenticalCircles, PointNotOnCircles
from circlereeb.geom import (
    Axis,
    Circle,
    Point,
    Tolerance,
    axis_extreme_points,
    circle_circle_intersections,
    crossing_angle,
    default_tolerance,
    is_transversal,
)

coord = st.floats(-3, 3, allow_nan=False)
radius = st.floats(0.05, 3, allow_nan=False)


@given(coord, coord, radius, coord, coord, radius)
def test_intersections_lie_on_both_circles(ax, ay, ar, bx, by, br):
    a, b = Circle.of(ax, ay, ar), Circle.of(bx, by, br)
    assume(a.center.dist(b.center) > 1e-6)
    for p in circle_circle_intersections(a, b):
        assert a.residual(p) < 1e-7
        assert b.residual(p) < 1e-7


@given(coord, coord, radius, coord, coord, radius)
def test_intersection_count_matches_distance(ax, ay, ar, bx, by, br):
    a, b = Circle.of(ax, ay, ar), Circle.of(bx, by, br)
    d = a.center.dist(b.center)
    assume(d > 1e-6)
    gap = min(abs(d - (ar + br)), abs(d - abs(ar - br)))
    assume(gap > 1e-6)
    n = len(circle_circle_intersections(a, b))
    assert n == (2 if abs(ar - br) < d < ar + br else 0)


def test_tangent_circles_give_one_point():
    pts = circle_circle_intersections(Circle.of(0, 0, 1), Circle.of(2, 0, 1))
    assert len(pts) == 1
    assert pts[0].x == pytest.approx(1.0)


def test_identical_circles_raise():
    with pytest.raises(IdenticalCircles):
        circle_circle_intersections(Circle.of(0, 0, 1), Circle.of(0, 0, 1))


def test_orthogonal_crossing():
    a, b = Circle.of(0, 0, 1), Circle.of(1, 1, 1)
    for p in circle_circle_intersections(a, b):
        assert crossing_angle(p, a, b) == pytest.approx(math.pi / 2)
        assert is_transversal(p, a, b)


def test_transversal_needs_point_on_both():
    with pytest.raises(PointNotOnCircles):
        is_transversal(Point(5, 5), Circle.of(0, 0, 1), Circle.of(1, 0, 1))


def test_axis_extremes():
    c = Circle.of(1, 2, 0.5)
    assert axis_extreme_points(c, Axis.HORIZONTAL) == (Point(0.5, 2), Point(1.5, 2))
    assert axis_extreme_points(c, Axis.VERTICAL) == (Point(1, 1.5), Point(1, 2.5))


def test_angle_of_round_trip():
    c = Circle.of(0.3, -0.2, 0.7)
    for k in range(12):
        t = k * math.pi / 6
        assert c.angle_of(c.point_at(t)) == pytest.approx(t % (2 * math.pi), abs=1e-12)


def test_tolerance_bounds():
    with pytest.raises(ValueError):
        Tolerance(eps_abs=0)
    with pytest.raises(ValueError):
        Tolerance(eps_abs=1e-2)


def test_tolerance_from_environment(monkeypatch):
    monkeypatch.setenv("PR_TOL", "1e-7")
    assert default_tolerance().eps_abs == 1e-7


def test_bad_geometry_rejected():
    with pytest.raises(ValueError):
        Circle.of(0, 0, -1)
    with pytest.raises(ValueError):
        Point(float("nan"), 0)

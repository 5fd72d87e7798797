"""Points, circles and the tolerance policy used by every geometric predicate."""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass

from .errors import IdenticalCircles, PointNotOnCircles


class Axis(enum.Enum):
    """Projection used for sweeping: HORIZONTAL projects onto x, VERTICAL onto y."""

    HORIZONTAL = "h"
    VERTICAL = "v"


@dataclass(frozen=True)
class Tolerance:
    eps_abs: float = 1e-9
    eps_angle: float = 1e-4

    def __post_init__(self):
        if not (0 < self.eps_abs < 1e-3):
            raise ValueError(f"eps_abs out of range: {self.eps_abs}")
        if not (0 < self.eps_angle < 0.1):
            raise ValueError(f"eps_angle out of range: {self.eps_angle}")


def default_tolerance() -> Tolerance:
    """Default tolerance, with eps_abs overridable through the PR_TOL variable."""
    raw = os.environ.get("PR_TOL")
    if raw:
        return Tolerance(eps_abs=float(raw))
    return Tolerance()


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __sub__(self, other: "Point") -> tuple[float, float]:
        return (self.x - other.x, self.y - other.y)

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def coord(self, axis: Axis) -> tuple[float, float]:
        """(sweep coordinate, transverse coordinate) for the given axis."""
        if axis is Axis.HORIZONTAL:
            return self.x, self.y
        return self.y, self.x


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"invalid radius {self.radius}")

    @classmethod
    def of(cls, cx: float, cy: float, r: float) -> "Circle":
        return cls(Point(float(cx), float(cy)), float(r))

    def point_at(self, theta: float) -> Point:
        return Point(self.center.x + self.radius * math.cos(theta),
                     self.center.y + self.radius * math.sin(theta))

    def angle_of(self, p: Point) -> float:
        """Polar angle of p about the center, in [0, 2*pi)."""
        a = math.atan2(p.y - self.center.y, p.x - self.center.x)
        return a % (2 * math.pi)

    def residual(self, p: Point) -> float:
        return abs(p.dist(self.center) - self.radius)

    def same_as(self, other: "Circle", tol: Tolerance) -> bool:
        return (self.center.dist(other.center) <= tol.eps_abs
                and abs(self.radius - other.radius) <= tol.eps_abs)


def circle_circle_intersections(a: Circle, b: Circle, tol: Tolerance = DEFAULT_TOL) -> list[Point]:
    """Common points of two circles.

    A single returned point means the circles are tangent (within tolerance);
    callers treat that case as degenerate.
    """
    if a.same_as(b, tol):
        raise IdenticalCircles(f"{a} and {b} coincide")
    dx = b.center.x - a.center.x
    dy = b.center.y - a.center.y
    d = math.hypot(dx, dy)
    ra, rb = a.radius, b.radius
    if d > ra + rb + tol.eps_abs or d < abs(ra - rb) - tol.eps_abs or d == 0.0:
        return []
    ux, uy = dx / d, dy / d
    if abs(d - (ra + rb)) <= tol.eps_abs:
        return [Point(a.center.x + ux * ra, a.center.y + uy * ra)]
    if abs(d - abs(ra - rb)) <= tol.eps_abs:
        s = ra if ra >= rb else -ra
        return [Point(a.center.x + ux * s, a.center.y + uy * s)]
    along = (ra * ra - rb * rb + d * d) / (2 * d)
    h2 = ra * ra - along * along
    h = math.sqrt(h2) if h2 > 0 else 0.0
    mx, my = a.center.x + ux * along, a.center.y + uy * along
    p1 = Point(mx - uy * h, my + ux * h)
    p2 = Point(mx + uy * h, my - ux * h)
    return sorted([p1, p2], key=lambda p: (p.x, p.y))


def crossing_angle(p: Point, a: Circle, b: Circle) -> float:
    """Angle in [0, pi/2] between the tangent lines of a and b at p."""
    nax, nay = p.x - a.center.x, p.y - a.center.y
    nbx, nby = p.x - b.center.x, p.y - b.center.y
    cross = abs(nax * nby - nay * nbx)
    dot = abs(nax * nbx + nay * nby)
    return math.atan2(cross, dot)


def is_transversal(p: Point, a: Circle, b: Circle, tol: Tolerance = DEFAULT_TOL) -> bool:
    slack = 10 * tol.eps_abs
    if a.residual(p) > slack or b.residual(p) > slack:
        raise PointNotOnCircles(f"{p} is not on both circles")
    return crossing_angle(p, a, b) > tol.eps_angle


def axis_extreme_points(c: Circle, axis: Axis) -> tuple[Point, Point]:
    """The two critical points of the axis projection restricted to c (min first)."""
    cx, cy, r = c.center.x, c.center.y, c.radius
    if axis is Axis.HORIZONTAL:
        return Point(cx - r, cy), Point(cx + r, cy)
    return Point(cx, cy - r), Point(cx, cy + r)

"""Regions cut out of the plane by circles.

A region is the open cell where every constraint is strictly satisfied: each
constraint keeps either the inside or the outside of one circle.  Fibers are
the one-dimensional slices of the closed cell over a sweep coordinate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

from .errors import GenericityViolation, IdenticalCircles
from .geom import (
    DEFAULT_TOL,
    Axis,
    Circle,
    Point,
    Tolerance,
    axis_extreme_points,
    circle_circle_intersections,
    crossing_angle,
)

TWO_PI = 2 * math.pi


class Side(enum.Enum):
    KEEP_INSIDE = "keep_in"
    KEEP_OUTSIDE = "keep_out"


@dataclass(frozen=True)
class HalfConstraint:
    circle: Circle
    side: Side

    @property
    def inside(self) -> bool:
        return self.side is Side.KEEP_INSIDE

    def signed_distance(self, p: Point) -> float:
        """Positive on the kept side, zero on the circle."""
        d = p.dist(self.circle.center) - self.circle.radius
        return -d if self.inside else d

    def value(self, p: Point) -> float:
        """The degree-2 defining polynomial, positive on the kept side."""
        c, r = self.circle.center, self.circle.radius
        v = r * r - (p.x - c.x) ** 2 - (p.y - c.y) ** 2
        return v if self.inside else -v


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class SingularKind(enum.Enum):
    DOUBLE_POINT = "double"
    TANGENCY = "tangency"


@dataclass(frozen=True)
class SingularPoint:
    location: Point
    kind: SingularKind
    circles: tuple[int, ...]
    axis: Optional[Axis] = None


class Interval(NamedTuple):
    lo: float
    hi: float
    # (constraint index, branch) owning each end; branch is -1 for the lower
    # half of the circle in transverse coordinate, +1 for the upper half.
    lo_owner: Optional[tuple[int, int]]
    hi_owner: Optional[tuple[int, int]]


@dataclass(frozen=True)
class Fiber:
    x: float
    intervals: tuple[Interval, ...]

    def __len__(self):
        return len(self.intervals)

    def find(self, t: float, slack: float = 0.0) -> Optional[int]:
        for k, iv in enumerate(self.intervals):
            if iv.lo - slack <= t <= iv.hi + slack:
                return k
        return None


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self):
        return f"{self.kind} violation: {self.message}"


@dataclass
class ValidityReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class SSRegion:
    constraints: tuple[HalfConstraint, ...]
    seed: Point
    tol: Tolerance = DEFAULT_TOL

    @classmethod
    def unit_disk(cls, tol: Tolerance = DEFAULT_TOL) -> "SSRegion":
        return cls((HalfConstraint(Circle.of(0.0, 0.0, 1.0), Side.KEEP_INSIDE),), Point(0.0, 0.0), tol)

    @classmethod
    def build(cls, circles: Sequence[tuple[float, float, float, Side]], seed=None,
              tol: Tolerance = DEFAULT_TOL) -> "SSRegion":
        cons = tuple(HalfConstraint(Circle.of(cx, cy, r), side) for cx, cy, r, side in circles)
        if seed is None:
            seed = pick_seed(cons, tol)
        elif not isinstance(seed, Point):
            seed = Point(*seed)
        return cls(cons, seed, tol)

    def __len__(self):
        return len(self.constraints)

    @property
    def circles(self) -> list[Circle]:
        return [c.circle for c in self.constraints]

    def with_constraint(self, hc: HalfConstraint) -> "SSRegion":
        cons = self.constraints + (hc,)
        seed = self.seed
        if min(c.signed_distance(seed) for c in cons) <= 1e3 * self.tol.eps_abs:
            seed = pick_seed(cons, self.tol)
        return SSRegion(cons, seed, self.tol)

    def permuted(self, order: Sequence[int]) -> "SSRegion":
        return SSRegion(tuple(self.constraints[i] for i in order), self.seed, self.tol)

    def sweep_circles(self, axis: Axis) -> tuple[tuple[float, float, float, bool], ...]:
        return self._sweep_h if axis is Axis.HORIZONTAL else self._sweep_v

    @cached_property
    def _sweep_h(self):
        return tuple((c.circle.center.x, c.circle.center.y, c.circle.radius, c.inside)
                     for c in self.constraints)

    @cached_property
    def _sweep_v(self):
        return tuple((c.circle.center.y, c.circle.center.x, c.circle.radius, c.inside)
                     for c in self.constraints)

    def margin(self, p: Point, skip: Sequence[int] = ()) -> float:
        """Smallest signed distance over constraints not listed in skip."""
        return min((c.signed_distance(p) for j, c in enumerate(self.constraints) if j not in skip),
                   default=math.inf)

    @cached_property
    def _pair_points(self) -> dict[tuple[int, int], list[Point]]:
        out = {}
        cons = self.constraints
        for i in range(len(cons)):
            for j in range(i + 1, len(cons)):
                try:
                    pts = circle_circle_intersections(cons[i].circle, cons[j].circle, self.tol)
                except IdenticalCircles:
                    pts = None
                out[(i, j)] = pts
        return out


def classify_point(r: SSRegion, p: Point) -> Location:
    eps = r.tol.eps_abs
    m = r.margin(p)
    if m > eps:
        return Location.INTERIOR
    if m >= -eps:
        return Location.BOUNDARY
    return Location.EXTERIOR


def fiber_at(circles, s: float, eps: float) -> tuple[Interval, ...]:
    """Closed slice {t : (s, t) satisfies every constraint} as disjoint intervals.

    circles are (sweep-center, transverse-center, radius, inside) tuples.
    """
    segs = [(-math.inf, math.inf, None, None)]
    for j, (cs, ct, rad, inside) in enumerate(circles):
        d = s - cs
        h2 = rad * rad - d * d
        if inside:
            if h2 < 0:
                return ()
            h = math.sqrt(h2)
            lo, hi = ct - h, ct + h
            nxt = []
            for a, b, oa, ob in segs:
                if a < lo:
                    a, oa = lo, (j, -1)
                if b > hi:
                    b, ob = hi, (j, 1)
                if a <= b:
                    nxt.append((a, b, oa, ob))
            segs = nxt
        else:
            if h2 <= 0:
                continue
            h = math.sqrt(h2)
            lo, hi = ct - h, ct + h
            nxt = []
            for a, b, oa, ob in segs:
                if b <= lo or a >= hi:
                    nxt.append((a, b, oa, ob))
                    continue
                if a <= lo:
                    nxt.append((a, lo, oa, (j, -1)))
                if b >= hi:
                    nxt.append((hi, b, (j, 1), ob))
            segs = nxt
        if not segs:
            return ()
    merged: list[list] = []
    for a, b, oa, ob in sorted(segs):
        if merged and a - merged[-1][1] <= eps:
            if b > merged[-1][1]:
                merged[-1][1], merged[-1][3] = b, ob
        else:
            merged.append([a, b, oa, ob])
    return tuple(Interval(*m) for m in merged)


def fiber(r: SSRegion, x: float, axis: Axis = Axis.HORIZONTAL) -> Fiber:
    return Fiber(x, fiber_at(r.sweep_circles(axis), x, r.tol.eps_abs))


def _double_point_candidates(r: SSRegion):
    """Boundary points lying on two circles, with genericity diagnostics.

    Yields (i, j, point, problem) where problem is None for a clean transversal
    double point, or a (kind, message) pair.
    """
    eps = r.tol.eps_abs
    cons = r.constraints
    for (i, j), pts in r._pair_points.items():
        if pts is None:
            continue
        for p in pts:
            others = [c.signed_distance(p) for k, c in enumerate(cons) if k not in (i, j)]
            if others and min(others) < -eps:
                continue
            if len(pts) == 1:
                yield i, j, p, ("transversality", f"circles {i} and {j} are tangent at ({p.x:.6g}, {p.y:.6g})")
            elif crossing_angle(p, cons[i].circle, cons[j].circle) <= r.tol.eps_angle:
                yield i, j, p, ("transversality", f"circles {i} and {j} cross at a too-small angle at ({p.x:.6g}, {p.y:.6g})")
            elif any(abs(v) <= eps for v in others):
                yield i, j, p, ("triple_point", f"three circles meet at boundary point ({p.x:.6g}, {p.y:.6g})")
            else:
                yield i, j, p, None


def singular_points(r: SSRegion, axis: Axis = Axis.HORIZONTAL) -> list[SingularPoint]:
    cache = r.__dict__.setdefault("_singular_cache", {})
    if axis in cache:
        return cache[axis]
    out = []
    for i, j, p, problem in _double_point_candidates(r):
        if problem is not None:
            raise GenericityViolation(problem[1])
        out.append(SingularPoint(p, SingularKind.DOUBLE_POINT, (i, j), None))
    eps = r.tol.eps_abs
    for j, c in enumerate(r.constraints):
        for q in axis_extreme_points(c.circle, axis):
            if r.margin(q, skip=(j,)) > eps:
                out.append(SingularPoint(q, SingularKind.TANGENCY, (j,), axis))
    out.sort(key=lambda sp: (sp.location.coord(axis), sp.circles))
    cache[axis] = out
    return out


def boundary_arcs(r: SSRegion, j: int) -> list[tuple[float, float]]:
    """Maximal angular intervals (start, end) of circle j lying on the boundary.

    Angles are measured counter-clockwise; start is in [0, 2*pi) and
    start < end <= start + 2*pi.
    """
    c = r.constraints[j].circle
    angles = []
    for (a, b), pts in r._pair_points.items():
        if j in (a, b) and pts:
            angles.extend(c.angle_of(p) for p in pts)
    angles = sorted(set(angles))
    skip = (j,)

    def on_boundary(theta):
        return r.margin(c.point_at(theta), skip=skip) > 0

    if not angles:
        return [(0.0, TWO_PI)] if on_boundary(0.0) else []
    pieces = []
    n = len(angles)
    for k in range(n):
        a = angles[k]
        b = angles[(k + 1) % n] if k + 1 < n else angles[0] + TWO_PI
        if b - a <= 0:
            continue
        if on_boundary(0.5 * (a + b)):
            pieces.append([a, b])
    if not pieces:
        return []
    merged = [pieces[0]]
    for a, b in pieces[1:]:
        if abs(a - merged[-1][1]) < 1e-15:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    if len(merged) > 1 and abs(merged[-1][1] - (merged[0][0] + TWO_PI)) < 1e-15:
        last = merged.pop()
        merged[0] = [last[0], merged[0][1] + TWO_PI]
    if len(merged) == 1 and merged[0][1] - merged[0][0] >= TWO_PI - 1e-15:
        return [(0.0, TWO_PI)]
    return [(a % TWO_PI, a % TWO_PI + (b - a)) for a, b in merged]


def validate(r: SSRegion) -> ValidityReport:
    report = ValidityReport()
    add = lambda kind, msg: report.violations.append(Violation(kind, msg))
    eps = r.tol.eps_abs
    cons = r.constraints
    if not cons:
        add("bounded", "region has no constraints")
        return report
    if not any(c.inside for c in cons):
        add("bounded", "no keep-inside constraint; the cell is unbounded")
    for j, c in enumerate(cons):
        if c.circle.radius <= eps:
            add("radius", f"circle {j} radius {c.circle.radius} below tolerance")
    for (i, j), pts in r._pair_points.items():
        if pts is None:
            add("identical", f"circles {i} and {j} coincide")
    if report.violations:
        return report
    for j, c in enumerate(cons):
        if c.signed_distance(r.seed) <= eps:
            add("seed", f"seed ({r.seed.x}, {r.seed.y}) does not strictly satisfy constraint {j}")
    seen = set()
    for i, j, p, problem in _double_point_candidates(r):
        if problem is not None and (problem[0], i, j) not in seen:
            seen.add((problem[0], i, j))
            add(*problem)
    for j in range(len(cons)):
        if not boundary_arcs(r, j):
            add("closure", f"circle {j} does not meet the closure of the region")
    if report.violations or not any(c.inside for c in cons):
        return report
    from .reeb import count_components  # deferred: reeb depends on this module

    try:
        n = count_components(r, Axis.HORIZONTAL)
    except GenericityViolation as exc:
        add("genericity", str(exc))
        return report
    if n != 1:
        add("connectivity", f"the cell has {n} connected components")
    return report


def pick_seed(constraints: Sequence[HalfConstraint], tol: Tolerance = DEFAULT_TOL) -> Point:
    """A deterministic interior point: middle of the widest sampled fiber interval."""
    inside = [c.circle for c in constraints if c.inside]
    if not inside:
        return Point(0.0, 0.0)
    lo = max(c.center.x - c.radius for c in inside)
    hi = min(c.center.x + c.radius for c in inside)
    circles = tuple((c.circle.center.x, c.circle.center.y, c.circle.radius, c.inside)
                    for c in constraints)
    best = None
    n = 257
    for k in range(1, n):
        x = lo + (hi - lo) * k / n
        for iv in fiber_at(circles, x, tol.eps_abs):
            w = iv.hi - iv.lo
            if best is None or w > best[0]:
                best = (w, x, 0.5 * (iv.lo + iv.hi))
    if best is None:
        return Point(0.5 * (lo + hi), inside[0].center.y)
    return Point(best[1], best[2])

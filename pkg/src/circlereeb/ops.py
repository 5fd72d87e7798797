"""Circle additions that edit a region's Poincare-Reeb graph in a controlled way.

mbcc removes a small disk centered on the boundary (subdivide an edge twice
and hang a pendant edge).  sscc cuts or intersects with a circle through two
nearby boundary points (subdivide an edge twice).  mbssc_pair chains the two so
that an mbcc sits inside the x-span of an sscc on the opposite arc.

Every search is deterministic: anchors come from a fixed low-discrepancy
sequence and sizes are halved on a fixed schedule, so a recorded step can be
replayed to the same floating point circle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    ArcPairNotFound,
    CaseInapplicable,
    CircleReebError,
    GenericityViolation,
    InvalidRegion,
    NoCandidatePoint,
    NoCandidatePair,
    ReplayDivergence,
    SearchBudgetExceeded,
    WindowUnsatisfiable,
)
from .geom import Axis, Circle, Point
from .reeb import (
    PRGraph,
    check_corollary1,
    check_corollary2,
    check_pair_pattern,
    compute_pr_graph,
    edge_address,
    is_tree,
    locate,
    resolve_edge,
)
from .region import HalfConstraint, Side, SingularKind, SSRegion, singular_points

MAX_HALVINGS = 40
ANCHOR_CANDIDATES = 8


class OpKind(enum.Enum):
    MBCC = "mbcc"
    SSCC_A1 = "sscc-a1"
    SSCC_A2 = "sscc-a2"
    SSCC_B = "sscc-b"
    MBSSCC_PAIR = "pair"


class SsccCase(enum.Enum):
    A1 = "a1"
    A2 = "a2"
    B = "b"

    @property
    def kind(self) -> OpKind:
        return {SsccCase.A1: OpKind.SSCC_A1, SsccCase.A2: OpKind.SSCC_A2, SsccCase.B: OpKind.SSCC_B}[self]


_CASE_OF_KIND = {OpKind.SSCC_A1: SsccCase.A1, OpKind.SSCC_A2: SsccCase.A2, OpKind.SSCC_B: SsccCase.B}


@dataclass(frozen=True)
class OpRecord:
    """One realized circle addition.

    mbcc params: theta (anchor angle on the host), radius.
    sscc params: theta1, theta2 (chord ends on the host), sagitta (signed
    height of the new arc over the chord, positive into the region).
    """

    kind: OpKind
    host: int
    edge: str
    params: tuple[tuple[str, float], ...]

    def param(self, name: str) -> float:
        for k, v in self.params:
            if k == name:
                return v
        raise KeyError(name)


@dataclass
class OpReport:
    added_circle: Circle
    new_singular_values: list[float]
    pattern_verified: bool
    search_iterations: int


@dataclass
class Plan:
    base: SSRegion = field(default_factory=SSRegion.unit_disk)
    steps: list[OpRecord] = field(default_factory=list)


# --- geometry helpers ------------------------------------------------------

def _vdc(k: int) -> float:
    """k-th term (k >= 1) of the base-2 van der Corput sequence."""
    out, denom = 0.0, 1.0
    while k:
        denom *= 2
        k, bit = divmod(k, 2)
        out += bit / denom
    return out


def mbcc_circle(host: Circle, theta: float, radius: float) -> Circle:
    return Circle(host.point_at(theta), radius)


def sscc_circle(host: HalfConstraint, theta1: float, theta2: float, sagitta: float) -> Circle:
    """Circle through the host points at theta1, theta2 whose arc rises `sagitta` over the chord.

    Positive sagitta bends the arc into the region, negative bends it toward
    the host arc.
    """
    hc = host.circle
    p1, p2 = hc.point_at(theta1), hc.point_at(theta2)
    mx, my = 0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)
    c = 0.5 * p1.dist(p2)
    dx, dy = hc.center.x - mx, hc.center.y - my
    dn = math.hypot(dx, dy)
    if dn == 0.0 or c == 0.0 or sagitta == 0.0:
        raise ValueError("degenerate chord")
    nx, ny = dx / dn, dy / dn
    if not host.inside:
        nx, ny = -nx, -ny
    h = abs(sagitta)
    rad = (c * c + h * h) / (2 * h)
    off = sagitta - rad if sagitta > 0 else sagitta + rad
    return Circle(Point(mx + nx * off, my + ny * off), rad)


def _arc_angle(c: Circle, branch: int, x: float) -> float:
    u = (x - c.center.x) / c.radius
    u = min(1.0, max(-1.0, u))
    return branch * math.acos(u)


@dataclass
class _Arc:
    which: str
    host: int
    branch: int
    xa: float
    xb: float
    ta: float
    tb: float


def _edge_arcs(r: SSRegion, g: PRGraph, eid: int, window) -> list[_Arc]:
    e = g.edges[eid]
    x0, x1 = e.slab
    if window is not None:
        x0, x1 = max(x0, window[0]), min(x1, window[1])
    out = []
    for which, owner in (("top", e.top_owner), ("bottom", e.bottom_owner)):
        if owner is None or x1 - x0 <= 4 * r.tol.eps_abs:
            continue
        j, b = owner
        c = r.constraints[j].circle
        out.append(_Arc(which, j, b, x0, x1, _arc_angle(c, b, x0), _arc_angle(c, b, x1)))
    return out


def _check_window(r: SSRegion, window):
    if window is None:
        return
    lo, hi = window
    if not hi - lo >= 4 * r.tol.eps_abs:
        raise WindowUnsatisfiable(f"x-window ({lo}, {hi}) is narrower than 4 eps")


class _Context:
    """Graphs and singular data of the region an op starts from."""

    def __init__(self, r: SSRegion):
        self.r = r
        try:
            self.gh = compute_pr_graph(r, Axis.HORIZONTAL)
            self.gv = compute_pr_graph(r, Axis.VERTICAL)
        except GenericityViolation as exc:
            raise InvalidRegion(f"region is not generic: {exc}") from None
        self.sing = [sp.location for sp in singular_points(r, Axis.HORIZONTAL)]
        self.sing += [sp.location for sp in singular_points(r, Axis.VERTICAL)]
        self.hcrit = self.gh.crits
        self.vcrit = self.gv.crits
        self.guard = 1e3 * r.tol.eps_abs

    def clear_of_vertices(self, p: Point) -> bool:
        g = self.guard
        return (all(abs(p.x - c) > g for c in self.hcrit)
                and all(abs(p.y - c) > g for c in self.vcrit))

    def spread(self, values: list[float], arc) -> float:
        """Smallest gap between estimated new singular values and the existing ones."""
        vals = sorted(values)
        best = min((b - a for a, b in zip(vals, vals[1:])), default=math.inf)
        for v in vals:
            best = min(best, v - arc.xa, arc.xb - v, min(abs(v - c) for c in self.hcrit))
        return best

    def nearest_singular(self, p: Point) -> float:
        return min(p.dist(q) for q in self.sing)

    def edge_pair(self, p: Point) -> Optional[tuple[int, int]]:
        try:
            lh = locate(self.r, self.gh, p)
            lv = locate(self.r, self.gv, p)
        except (CircleReebError, ValueError):
            return None
        if lh.edge is None or lv.edge is None:
            return None
        return lh.edge, lv.edge


@dataclass
class _Outcome:
    region: SSRegion
    graph: PRGraph
    values: list[float]


def _try_addition(ctx: _Context, eid: int, hc: HalfConstraint, host: int, n_double: int,
                  n_tangent: int, xa: float, xb: float, pattern) -> Optional[_Outcome]:
    r2 = ctx.r.with_constraint(hc)
    try:
        g2 = compute_pr_graph(r2, Axis.HORIZONTAL)
        compute_pr_graph(r2, Axis.VERTICAL)
    except (InvalidRegion, GenericityViolation):
        return None
    if not is_tree(g2) or not pattern(ctx.gh, g2, eid):
        return None
    new = len(r2.constraints) - 1
    mine = [sp for sp in singular_points(r2, Axis.HORIZONTAL) if new in sp.circles]
    dbl = [sp for sp in mine if sp.kind is SingularKind.DOUBLE_POINT]
    tan = [sp for sp in mine if sp.kind is SingularKind.TANGENCY]
    if len(dbl) != n_double or len(tan) != n_tangent:
        return None
    if any(set(sp.circles) != {host, new} for sp in dbl):
        return None
    vals = sorted(sp.location.x for sp in mine)
    eps = ctx.r.tol.eps_abs
    if any(b - a <= 2 * eps for a, b in zip(vals, vals[1:])):
        return None
    if vals[0] <= xa or vals[-1] >= xb:
        return None
    return _Outcome(r2, g2, vals)


# --- MBCC ------------------------------------------------------------------

def mbcc(r: SSRegion, target_edge, window: Optional[tuple[float, float]] = None,
         upper_half: bool = False, arc: Optional[str] = None,
         max_iter: int = MAX_HALVINGS) -> tuple[SSRegion, OpRecord, OpReport]:
    """Remove a small disk centered on a boundary point of the target edge.

    arc restricts the anchor to the edge's "top" or "bottom" boundary arc.
    """
    _check_window(r, window)
    ctx = _Context(r)
    eid = resolve_edge(ctx.gh, target_edge)
    addr = edge_address(ctx.gh, eid)
    arcs = [a for a in _edge_arcs(r, ctx.gh, eid, window) if arc is None or a.which == arc]
    if window is not None and not arcs:
        raise WindowUnsatisfiable(f"x-window {window} misses edge {addr}")
    iterations = 0
    tried = False
    cands = []
    for a in arcs:
        hc = r.constraints[a.host]
        if upper_half and not hc.inside:
            continue
        for k in range(1, ANCHOR_CANDIDATES + 1):
            theta = a.ta + _vdc(k) * (a.tb - a.ta)
            p = hc.circle.point_at(theta)
            if not ctx.clear_of_vertices(p) or r.margin(p, skip=(a.host,)) <= ctx.guard:
                continue
            if upper_half and p.y <= 0:
                continue
            pair = ctx.edge_pair(p)
            if pair is None or pair[0] != eid:
                continue
            rho = 0.25 * min(ctx.nearest_singular(p), hc.circle.radius)
            rho = min(rho, 0.999 * (p.x - a.xa), 0.999 * (a.xb - p.x))
            if upper_half:
                rho = min(rho, 0.999 * p.y)
            if rho <= 0:
                continue
            # the new values sit near x -+ rho and x -+ rho*|sin|; prefer
            # anchors that keep them apart from each other and from old ones
            sn = abs(math.sin(theta))
            est = [p.x - rho, p.x + rho, p.x - rho * sn, p.x + rho * sn]
            cands.append((-ctx.spread(est, a), k, a, theta, rho))
    cands.sort(key=lambda c: c[:2])
    for _, _, a, theta, rho in cands:
        hc = r.constraints[a.host]
        tried = True
        theta_rec = theta % (2 * math.pi)
        for _ in range(max_iter):
            iterations += 1
            circ = mbcc_circle(hc.circle, theta_rec, rho)
            out = _try_addition(ctx, eid, HalfConstraint(circ, Side.KEEP_OUTSIDE), a.host,
                                2, 1, a.xa, a.xb, check_corollary1)
            if out is not None:
                rec = OpRecord(OpKind.MBCC, a.host, addr,
                               (("theta", theta_rec), ("radius", rho)))
                return out.region, rec, OpReport(circ, out.values, True, iterations)
            rho *= 0.5
    if not tried:
        raise NoCandidatePoint(f"no admissible anchor on edge {addr}")
    raise SearchBudgetExceeded(f"mbcc on edge {addr} failed after {iterations} trials")


# --- SSCC ------------------------------------------------------------------

def _chord_ok(r: SSRegion, p1: Point, p2: Point, inside: bool) -> bool:
    eps = r.tol.eps_abs
    for f in (0.25, 0.5, 0.75):
        q = Point(p1.x + f * (p2.x - p1.x), p1.y + f * (p2.y - p1.y))
        m = r.margin(q)
        if inside and m < -eps:
            return False
        if not inside and m >= -eps:
            return False
    return True


def _sscc_sagitta(case: SsccCase, host: HalfConstraint, theta1, theta2, bulge) -> float:
    hc = host.circle
    p1, p2 = hc.point_at(theta1), hc.point_at(theta2)
    c = 0.5 * p1.dist(p2)
    mid = Point(0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y))
    s_h = hc.radius - mid.dist(hc.center)
    if case is SsccCase.A1:
        return bulge * c
    if case is SsccCase.A2:
        return -bulge * s_h
    return s_h + bulge * c


def sscc(r: SSRegion, target_edge, case: SsccCase, window: Optional[tuple[float, float]] = None,
         arc: Optional[str] = None, max_iter: int = MAX_HALVINGS) -> tuple[SSRegion, OpRecord, OpReport]:
    """Add a circle through two nearby boundary points of the target edge."""
    if isinstance(case, str):
        case = SsccCase(case.lower().replace("-", ""))
    _check_window(r, window)
    ctx = _Context(r)
    eid = resolve_edge(ctx.gh, target_edge)
    addr = edge_address(ctx.gh, eid)
    arcs = [a for a in _edge_arcs(r, ctx.gh, eid, window) if arc is None or a.which == arc]
    if window is not None and not arcs:
        raise WindowUnsatisfiable(f"x-window {window} misses edge {addr}")
    want_inside = case is not SsccCase.B
    arcs = [a for a in arcs if r.constraints[a.host].inside == want_inside]
    if not arcs:
        kind = "convex" if case is SsccCase.B else "concave"
        raise CaseInapplicable(f"case {case.name} needs a {'concave' if case is SsccCase.B else 'convex'} "
                               f"arc; edge {addr} has only {kind} arcs")
    side = Side.KEEP_INSIDE if case is SsccCase.A2 else Side.KEEP_OUTSIDE
    iterations = 0
    tried = False
    cands = []
    for a in arcs:
        span = a.tb - a.ta
        for k in range(1, ANCHOR_CANDIDATES + 1):
            phi = a.ta + _vdc(k) * span
            d0 = min(abs(span) / 8, 0.9 * abs(phi - a.ta), 0.9 * abs(a.tb - phi))
            c = r.constraints[a.host].circle
            est = [c.point_at(phi - d0).x, c.point_at(phi + d0).x]
            cands.append((-ctx.spread(est, a), k, a, phi))
    cands.sort(key=lambda c: c[:2])
    for _, _, a, phi in cands:
        hc = r.constraints[a.host]
        span = a.tb - a.ta
        delta = min(abs(span) / 8, 0.9 * abs(phi - a.ta), 0.9 * abs(a.tb - phi))
        bulge = 0.25 if case is not SsccCase.A2 else 0.5
        sgn = 1.0 if span > 0 else -1.0
        for _ in range(max_iter):
            iterations += 1
            t1 = (phi - sgn * delta) % (2 * math.pi)
            t2 = (phi + sgn * delta) % (2 * math.pi)
            p1, p2 = hc.circle.point_at(t1), hc.circle.point_at(t2)
            ok = (ctx.clear_of_vertices(p1) and ctx.clear_of_vertices(p2)
                  and r.margin(p1, skip=(a.host,)) > ctx.guard
                  and r.margin(p2, skip=(a.host,)) > ctx.guard)
            if ok:
                e1, e2 = ctx.edge_pair(p1), ctx.edge_pair(p2)
                ok = e1 is not None and e1 == e2 and e1[0] == eid
            if ok and _chord_ok(r, p1, p2, want_inside):
                tried = True
                s = _sscc_sagitta(case, hc, t1, t2, bulge)
                try:
                    circ = sscc_circle(hc, t1, t2, s)
                except ValueError:
                    circ = None
                if circ is not None:
                    out = _try_addition(ctx, eid, HalfConstraint(circ, side), a.host, 2, 0,
                                        a.xa, a.xb, check_corollary2)
                    if out is not None:
                        rec = OpRecord(case.kind, a.host, addr,
                                       (("theta1", t1), ("theta2", t2), ("sagitta", s)))
                        return out.region, rec, OpReport(circ, out.values, True, iterations)
            delta *= 0.5
            bulge *= 0.5
    if not tried:
        raise NoCandidatePair(f"no admissible point pair on edge {addr}")
    raise SearchBudgetExceeded(f"sscc {case.name} on edge {addr} failed after {iterations} trials")


def default_sscc_case(r: SSRegion, target_edge) -> SsccCase:
    """A-1 when the edge has a convex arc, B otherwise."""
    g = compute_pr_graph(r, Axis.HORIZONTAL)
    e = g.edges[resolve_edge(g, target_edge)]
    for owner in (e.top_owner, e.bottom_owner):
        if owner is not None and r.constraints[owner[0]].inside:
            return SsccCase.A1
    return SsccCase.B


# --- pair ------------------------------------------------------------------

def mbssc_pair(r: SSRegion, sibling_edge, epsilon_frac: float = 0.5,
               window: Optional[tuple[float, float]] = None,
               upper_half: bool = True) -> tuple[SSRegion, tuple[OpRecord, OpRecord], OpReport]:
    """SSCC on the bottom arc of an edge, then an MBCC on its top arc nested in the SSCC's span.

    The MBCC's singular values land in (a1 + eps, a2 - eps) where (a1, a2) are
    the SSCC's values and eps = epsilon_frac * (a2 - a1) / 2.
    """
    if not 0 < epsilon_frac < 1:
        raise ValueError(f"epsilon_frac must lie in (0, 1), got {epsilon_frac}")
    _check_window(r, window)
    g0 = compute_pr_graph(r, Axis.HORIZONTAL)
    eid = resolve_edge(g0, sibling_edge)
    e = g0.edges[eid]
    if e.top_owner is None or e.bottom_owner is None:
        raise ArcPairNotFound(f"edge {edge_address(g0, eid)} is not bounded by two arcs")
    top_host = e.top_owner[0]
    case = SsccCase.A2 if r.constraints[e.bottom_owner[0]].inside else SsccCase.B
    try:
        r1, rec1, rep1 = sscc(r, eid, case, window=window, arc="bottom")
    except (NoCandidatePair, CaseInapplicable, WindowUnsatisfiable) as exc:
        raise ArcPairNotFound(f"no opposite arc usable on edge {edge_address(g0, eid)}: {exc}") from None
    a21, a22 = rep1.new_singular_values
    eps = epsilon_frac * (a22 - a21) / 2
    inner = (a21 + eps, a22 - eps)
    g1 = compute_pr_graph(r1, Axis.HORIZONTAL)
    xm = 0.5 * (a21 + a22)
    c = r1.constraints[top_host].circle
    b = e.top_owner[1]
    p = c.point_at(_arc_angle(c, b, xm))
    mid_edge = locate(r1, g1, p).edge
    if mid_edge is None:
        raise ArcPairNotFound("top arc over the sscc span is not inside an edge")
    r2, rec2, rep2 = mbcc(r1, mid_edge, window=inner, upper_half=upper_half, arc="top")
    g2 = compute_pr_graph(r2, Axis.HORIZONTAL)
    ok = check_pair_pattern(g0, g2, eid)
    values = sorted(rep1.new_singular_values + rep2.new_singular_values)
    report = OpReport(rep2.added_circle, values, ok,
                      rep1.search_iterations + rep2.search_iterations)
    if not ok:
        raise SearchBudgetExceeded(f"pair on edge {edge_address(g0, eid)} did not give the expected pattern")
    return r2, (rec1, rec2), report


# --- replay ----------------------------------------------------------------

def circle_of(r: SSRegion, rec: OpRecord) -> HalfConstraint:
    if not 0 <= rec.host < len(r.constraints):
        raise ReplayDivergence(f"host index {rec.host} out of range")
    host = r.constraints[rec.host]
    if rec.kind is OpKind.MBCC:
        return HalfConstraint(mbcc_circle(host.circle, rec.param("theta"), rec.param("radius")),
                              Side.KEEP_OUTSIDE)
    case = _CASE_OF_KIND.get(rec.kind)
    if case is None:
        raise ReplayDivergence(f"cannot replay a step of kind {rec.kind.value}")
    circ = sscc_circle(host, rec.param("theta1"), rec.param("theta2"), rec.param("sagitta"))
    side = Side.KEEP_INSIDE if case is SsccCase.A2 else Side.KEEP_OUTSIDE
    return HalfConstraint(circ, side)


def apply_record(r: SSRegion, rec: OpRecord, check: bool = True) -> SSRegion:
    try:
        hc = circle_of(r, rec)
        r2 = r.with_constraint(hc)
        if not check:
            return r2
        g = compute_pr_graph(r, Axis.HORIZONTAL)
        eid = resolve_edge(g, rec.edge)
        g2 = compute_pr_graph(r2, Axis.HORIZONTAL)
        compute_pr_graph(r2, Axis.VERTICAL)
    except (CircleReebError, KeyError, ValueError) as exc:
        raise ReplayDivergence(f"step {rec.kind.value} on edge {rec.edge}: {exc}") from None
    pattern = check_corollary1 if rec.kind is OpKind.MBCC else check_corollary2
    if not pattern(g, g2, eid):
        raise ReplayDivergence(f"step {rec.kind.value} on edge {rec.edge} broke the expected graph pattern")
    return r2


def replay(plan: Plan, check: bool = True) -> SSRegion:
    r = plan.base
    for rec in plan.steps:
        r = apply_record(r, rec, check)
    return r


def apply_op(r: SSRegion, kind: OpKind, edge, **kw) -> tuple[SSRegion, list[OpRecord], OpReport]:
    """Uniform entry point used by the CLI and the fuzzer."""
    if kind is OpKind.MBCC:
        r2, rec, rep = mbcc(r, edge, **kw)
        return r2, [rec], rep
    if kind is OpKind.MBSSCC_PAIR:
        r2, recs, rep = mbssc_pair(r, edge, **kw)
        return r2, list(recs), rep
    r2, rec, rep = sscc(r, edge, _CASE_OF_KIND[kind], **kw)
    return r2, [rec], rep

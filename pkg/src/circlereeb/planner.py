"""Turn a family tree into a circle arrangement whose horizontal graph is that tree.

Layout: every unit owns an x-span along the upper unit circle.  The root
unit uses (0.2, 1 - delta); a pendant unit uses the horn cut off by the
bite that made its attachment vertex.  Each interior path vertex gets a
bite (or a toggled SSCC/MBCC pair) in its own slot of that span, the gaps
between slots belong to the unit's edges and receive the final SSCCs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .errors import GeometricSearchFailed, NotInFamily, OperationError, VerificationFailed
from .geom import Axis
from .grammar import Certificate, GrammarParams, Unit, build, recognize
from .ops import OpRecord, Plan, SsccCase, mbcc, mbssc_pair, sscc
from .reeb import compute_pr_graph, is_tree
from .region import SSRegion, fiber_at
from .trees import Tree, canonical_code

log = logging.getLogger(__name__)

ROOT_LEFT = 0.2
DEFAULT_DELTA = 0.05
RETRIES = 3
SLOT_WEIGHT, GAP_WEIGHT = 3.0, 1.0


@dataclass
class RealizationResult:
    tree: Tree
    certificate: Certificate
    plan: Plan
    region: SSRegion
    skeleton_circles: int
    delta: float
    verified: bool = True

    @property
    def code(self) -> str:
        return canonical_code(self.tree)

    def record(self) -> str:
        return f"verified {self.code} circles={len(self.region.constraints)} steps={len(self.plan.steps)}"


def skeleton_circle_count(p: GrammarParams) -> int:
    """Circles after the first phase: the disk plus one bite per interior path vertex."""
    return 1 + sum(u.n for u in p.units())


def base_counts(p: GrammarParams) -> dict[str, int]:
    """Subdivisions each unit edge carries after plain bites: the pass vertex of bite k lies on edge k."""
    return {u.edge(k): (0 if k == 0 else 1) for u in p.units() for k in range(u.n + 1)}


def toggles(u: Unit, final: dict[str, int]) -> list[int]:
    """Which path vertices (1..n) need a pair instead of a bite to fix the edge parities."""
    if u.n == 0:
        return []
    d = [(final[u.edge(k)] + (0 if k == 0 else 1)) % 2 for k in range(u.n + 1)]
    t = [d[0]]
    for k in range(1, u.n):
        t.append((d[k] + t[-1]) % 2)
    if t[-1] != d[u.n]:
        raise VerificationFailed(f"parities of unit {u.address} cannot be fixed by toggles")
    return t


def _layout(span: tuple[float, float], n: int, root: bool):
    """Slots for n bites and the gap owned by each of the n+1 unit edges."""
    lo, hi = span
    if not root:
        pad = 0.05 * (hi - lo)
        lo, hi = lo + pad, hi - pad
    segs = ([] if root else ["gap"]) + ["slot", "gap"] * n
    if root and n == 0:
        return [], [(-0.85, 0.85)]
    weights = [SLOT_WEIGHT if s == "slot" else GAP_WEIGHT for s in segs]
    unit = (hi - lo) / sum(weights)
    slots, gaps = [], []
    x = lo
    for s, w in zip(segs, weights):
        piece = (x, x + w * unit)
        (slots if s == "slot" else gaps).append(piece)
        x += w * unit
    if root:
        gaps.insert(0, (-0.85, -0.15))
    return slots, gaps


def top_edge_at(r: SSRegion, x: float) -> int:
    """Edge of the uppermost fiber component over abscissa x."""
    g = compute_pr_graph(r, Axis.HORIZONTAL)
    i = max(k for k, c in enumerate(g.crits) if c < x)
    ivs = fiber_at(r.sweep_circles(Axis.HORIZONTAL), x, r.tol.eps_abs)
    k = max(range(len(ivs)), key=lambda q: ivs[q].hi)
    return g.slab_edges[i][k]


@dataclass
class _Build:
    r: SSRegion
    steps: list[OpRecord] = field(default_factory=list)
    gaps: dict[str, tuple[float, float]] = field(default_factory=dict)
    trace: dict = field(default_factory=dict)


def _place_unit(b: _Build, p: GrammarParams, u: Unit, span, root: bool, use_pairs: bool):
    slots, gaps = _layout(span, u.n, root)
    for k, gap in enumerate(gaps):
        b.gaps[u.edge(k)] = gap
    flips = toggles(u, p.final) if use_pairs else [0] * u.n
    horns = []
    for k, slot in enumerate(slots, start=1):
        b.trace["stage"] = f"bite at {u.vertex(k)}"
        eid = top_edge_at(b.r, 0.5 * (slot[0] + slot[1]))
        if flips[k - 1]:
            b.r, recs, rep = mbssc_pair(b.r, eid, window=slot)
            b.steps.extend(recs)
            vals = rep.new_singular_values
            horns.append((vals[1], vals[2]))
        else:
            b.r, rec, rep = mbcc(b.r, eid, window=slot, upper_half=True, arc="top")
            b.steps.append(rec)
            vals = rep.new_singular_values
            horns.append((vals[0], vals[1]))
    for k, horn in enumerate(horns, start=1):
        v = u.vertex(k)
        _place_unit(b, p, Unit(v, p.attach[v], True), horn, False, use_pairs)


def _skeleton(p: GrammarParams, delta: float, use_pairs: bool, trace: dict) -> _Build:
    b = _Build(SSRegion.unit_disk(), trace=trace)
    _place_unit(b, p, Unit("r", p.n0, False), (ROOT_LEFT, 1 - delta), True, use_pairs)
    return b


def _edge_counts(p: GrammarParams, use_pairs: bool) -> dict[str, int]:
    counts = base_counts(p)
    if not use_pairs:
        return counts
    for u in p.units():
        for k, t in enumerate(toggles(u, p.final), start=1):
            if t:
                counts[u.edge(k - 1)] += 1
                counts[u.edge(k)] += 1
    return counts


def _tree_of(r: SSRegion) -> Tree:
    g = compute_pr_graph(r, Axis.HORIZONTAL)
    if not is_tree(g):
        raise VerificationFailed("graph is not a tree")
    return g.as_tree()


def _attempt(p: GrammarParams, target: str, delta: float, trace: dict) -> tuple[_Build, int]:
    # phase 1: plain bites only, checked against the skeleton with pass vertices
    sk = _skeleton(p, delta, False, trace)
    n_sk = len(sk.r.constraints)
    if n_sk != skeleton_circle_count(p):
        raise VerificationFailed(f"skeleton has {n_sk} circles, expected {skeleton_circle_count(p)}")
    want = canonical_code(build(p, base_counts(p))[0])
    if canonical_code(_tree_of(sk.r)) != want:
        raise VerificationFailed("skeleton graph differs from the expected shape")

    # phase 2: the same layout with pairs at toggled vertices
    b = _skeleton(p, delta, True, trace)
    counts = _edge_counts(p, use_pairs=True)

    # phase 3: SSCCs in the gaps until every edge has its final count
    for name, gap in b.gaps.items():
        extra = p.final[name] - counts[name]
        if extra < 0 or extra % 2:
            raise VerificationFailed(f"edge {name} has {counts[name]} subdivisions, cannot reach {p.final[name]}")
        m = extra // 2
        w = (gap[1] - gap[0]) / max(m, 1)
        for i in range(m):
            sub = (gap[0] + i * w + 0.05 * w, gap[0] + (i + 1) * w - 0.05 * w)
            b.trace["stage"] = f"sscc {i + 1}/{m} on {name}"
            eid = top_edge_at(b.r, 0.5 * (sub[0] + sub[1]))
            b.r, rec, _ = sscc(b.r, eid, SsccCase.A1, window=sub, arc="top")
            b.steps.append(rec)
    if canonical_code(_tree_of(b.r)) != target:
        raise VerificationFailed("realized graph is not the requested tree")
    return b, n_sk


def realize(t: Tree, delta: float = DEFAULT_DELTA, retries: int = RETRIES) -> RealizationResult:
    cert = recognize(t)
    if not cert.accepted:
        raise NotInFamily(cert.reason)
    target = canonical_code(t)
    last: Optional[OperationError] = None
    trace: dict = {}
    for attempt in range(retries + 1):
        d = delta * 2 ** attempt
        if 1 - d <= ROOT_LEFT:
            break
        try:
            b, n_sk = _attempt(cert.params, target, d, trace)
        except OperationError as exc:
            last = exc
            log.info("attempt with delta=%g failed: %s", d, exc)
            continue
        plan = Plan(SSRegion.unit_disk(), b.steps)
        return RealizationResult(t, cert, plan, b.r, n_sk, d)
    raise GeometricSearchFailed(f"no realization after {retries + 1} attempts: {last}", step=trace.get("stage"))


def verify(result: RealizationResult) -> bool:
    """Replay the plan from scratch and compare the graph with the tree."""
    from .ops import replay

    r = replay(result.plan, check=True)
    return canonical_code(_tree_of(r)) == canonical_code(result.tree)

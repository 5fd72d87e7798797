"""Sweep computation of Poincare-Reeb graphs and the checks built on them.

The sweep visits the critical abscissae (sweep coordinates of singular
points) in order.  Between two consecutive ones the fiber has a constant
number of components, each bounded by a fixed pair of circle branches.  At a
critical abscissa the components just left and just right of it are grouped
by overlap; a group holding a singular point becomes a vertex, any other
group simply continues an edge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import GenericityViolation, InvalidRegion, NotATree, PointOutsideRegion
from .geom import Axis, Point
from .region import (
    Interval,
    Location,
    SingularPoint,
    SSRegion,
    classify_point,
    fiber_at,
    singular_points,
    validate,
)
from .trees import Tree, attach_leaf, canonical_code, subdivide

__all__ = [
    "Axis", "VertexKind", "PRVertex", "PREdge", "PRGraph", "GraphLocation",
    "compute_pr_graph", "count_components", "is_tree", "canonical_code", "locate",
    "edge_address", "resolve_edge", "check_corollary1", "check_corollary2",
    "check_pair_pattern",
]

_PROBE_FRACTION = 1e-4


class VertexKind(enum.Enum):
    LEAF = "leaf"
    PASS = "pass"
    JUNCTION = "junction"

    @classmethod
    def from_degree(cls, d: int) -> "VertexKind":
        if d <= 1:
            return cls.LEAF
        if d == 2:
            return cls.PASS
        return cls.JUNCTION


@dataclass
class PRVertex:
    id: int
    x: float
    interval: tuple[float, float]
    kind: VertexKind
    singulars: list[SingularPoint]
    degree: int = 0


@dataclass
class PREdge:
    id: int
    endpoints: tuple[int, int]
    slab: tuple[float, float]
    sample_interval: Interval
    sample_x: float

    @property
    def bottom_owner(self):
        return self.sample_interval.lo_owner

    @property
    def top_owner(self):
        return self.sample_interval.hi_owner


@dataclass
class _Cluster:
    crit: int
    left: list[int]
    right: list[int]
    hull: tuple[float, float]
    singulars: list[SingularPoint] = field(default_factory=list)
    vertex: Optional[int] = None


@dataclass
class PRGraph:
    axis: Axis
    vertices: list[PRVertex]
    edges: list[PREdge]
    crits: list[float] = field(default_factory=list)
    # sweep bookkeeping used by locate(); empty for hand-built graphs
    slab_edges: list[list[int]] = field(default_factory=list, repr=False)
    clusters: list[list[_Cluster]] = field(default_factory=list, repr=False)

    def degree(self, v: int) -> int:
        return sum((e.endpoints[0] == v) + (e.endpoints[1] == v) for e in self.edges)

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """(edge id, other endpoint) pairs at v."""
        out = []
        for e in self.edges:
            a, b = e.endpoints
            if a == v:
                out.append((e.id, b))
            if b == v:
                out.append((e.id, a))
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            parent[find(e.endpoints[0])] = find(e.endpoints[1])
        return len({find(v.id) for v in self.vertices}) == 1

    def as_tree(self) -> Tree:
        if not is_tree(self):
            raise NotATree(f"graph with {len(self.vertices)} vertices and {len(self.edges)} edges is not a tree")
        return Tree(len(self.vertices), tuple(e.endpoints for e in self.edges))

    def vertex_with(self, pred) -> list[PRVertex]:
        return [v for v in self.vertices if any(pred(sp) for sp in v.singulars)]

    def summary(self) -> str:
        kinds = [v.kind.value for v in self.vertices]
        return f"{len(self.vertices)} vertices, {len(self.edges)} edges, kinds={kinds}"


def _group_crits(points: list[tuple[float, SingularPoint]], eps: float):
    groups: list[list[tuple[float, SingularPoint]]] = []
    for s, sp in sorted(points, key=lambda q: q[0]):
        if groups and s - groups[-1][-1][0] <= 2 * eps:
            groups[-1].append((s, sp))
        else:
            groups.append([(s, sp)])
    return groups


def _signature(ivs: Sequence[Interval]):
    return tuple((iv.lo_owner, iv.hi_owner) for iv in ivs)


def _build_graph(r: SSRegion, axis: Axis) -> PRGraph:
    cache = r.__dict__.setdefault("_graph_cache", {})
    if axis in cache:
        hit = cache[axis]
        if isinstance(hit, Exception):
            raise hit
        return hit
    try:
        g = _sweep(r, axis)
    except GenericityViolation as exc:
        cache[axis] = exc
        raise
    cache[axis] = g
    return g


def _sweep(r: SSRegion, axis: Axis) -> PRGraph:
    eps = r.tol.eps_abs
    circles = r.sweep_circles(axis)
    sps = singular_points(r, axis)
    if not sps:
        raise InvalidRegion("region has no singular points (empty or unbounded)")
    groups = _group_crits([(sp.location.coord(axis)[0], sp) for sp in sps], eps)
    crits = [sum(s for s, _ in g) / len(g) for g in groups]
    m = len(crits)

    # slab structure: mid sample plus probes near both ends
    slabs: list[tuple[Interval, ...]] = []
    near_left: list[tuple[Interval, ...]] = []
    near_right: list[tuple[Interval, ...]] = []
    for i in range(m - 1):
        a, b = crits[i], crits[i + 1]
        w = b - a
        mid = fiber_at(circles, a + 0.5 * w, eps)
        sig = _signature(mid)
        d = w * _PROBE_FRACTION
        probes = [fiber_at(circles, a + f * w, eps) for f in (0.25, 0.75)]
        lp = fiber_at(circles, a + d, eps)
        rp = fiber_at(circles, b - d, eps)
        for pr in probes + [lp, rp]:
            if _signature(pr) != sig:
                raise GenericityViolation(
                    f"fiber structure changes inside slab ({a:.12g}, {b:.12g}); a critical value was missed")
        slabs.append(mid)
        near_left.append(lp)
        near_right.append(rp)

    # clusters at every critical abscissa
    clusters: list[list[_Cluster]] = []
    for i in range(m):
        left = near_right[i - 1] if i > 0 else ()
        right = near_left[i] if i < m - 1 else ()
        nl = len(left)
        parent = list(range(nl + len(right)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a_idx, L in enumerate(left):
            for b_idx, R in enumerate(right):
                if L.lo <= R.hi + eps and R.lo <= L.hi + eps:
                    parent[find(a_idx)] = find(nl + b_idx)
        bucket: dict[int, _Cluster] = {}
        for node in range(nl + len(right)):
            root = find(node)
            cl = bucket.get(root)
            iv = left[node] if node < nl else right[node - nl]
            if cl is None:
                cl = bucket[root] = _Cluster(i, [], [], (iv.lo, iv.hi))
            else:
                cl.hull = (min(cl.hull[0], iv.lo), max(cl.hull[1], iv.hi))
            if node < nl:
                cl.left.append(node)
            else:
                cl.right.append(node - nl)
        row = sorted(bucket.values(), key=lambda c: c.hull)
        d_l = (crits[i] - crits[i - 1]) * _PROBE_FRACTION if i > 0 else 0.0
        d_r = (crits[i + 1] - crits[i]) * _PROBE_FRACTION if i < m - 1 else 0.0
        slack = 10 * (d_l + d_r) + 10 * eps
        for s, sp in groups[i]:
            t = sp.location.coord(axis)[1]
            ranked = sorted(range(len(row)), key=lambda k: _dist_to(row[k].hull, t))
            if not ranked or _dist_to(row[ranked[0]].hull, t) > slack:
                raise GenericityViolation(f"no fiber component near the singular point at {s:.12g}")
            if len(ranked) > 1 and _dist_to(row[ranked[1]].hull, t) <= slack:
                raise GenericityViolation(
                    f"singular point at {s:.12g} cannot be assigned to a single fiber component")
            row[ranked[0]].singulars.append(sp)
        for cl in row:
            if not cl.singulars and not (len(cl.left) == 1 and len(cl.right) == 1):
                raise GenericityViolation(
                    f"fiber topology changes at {crits[i]:.12g} without a singular point")
        clusters.append(row)

    vertices: list[PRVertex] = []
    for i, row in enumerate(clusters):
        for cl in row:
            if cl.singulars:
                cl.vertex = len(vertices)
                ts = [sp.location.coord(axis)[1] for sp in cl.singulars]
                lo, hi = min([cl.hull[0]] + ts), max([cl.hull[1]] + ts)
                vertices.append(PRVertex(cl.vertex, crits[i], (lo, hi), VertexKind.LEAF,
                                         list(cl.singulars)))

    # chain slab components through regular clusters
    slab_chain: list[list[int]] = [[-1] * len(s) for s in slabs]
    chains: list[list[tuple[int, int]]] = []
    for i in range(m - 1):
        for k in range(len(slabs[i])):
            if slab_chain[i][k] >= 0:
                continue
            cid = len(chains)
            chain = [(i, k)]
            slab_chain[i][k] = cid
            si, sk = i, k
            while True:
                cl = _cluster_of(clusters[si + 1], left=sk)
                if cl.vertex is not None:
                    break
                si, sk = si + 1, cl.right[0]
                slab_chain[si][sk] = cid
                chain.append((si, sk))
            chains.append(chain)

    edges: list[PREdge] = []
    slab_edges = [[-1] * len(s) for s in slabs]
    raw = []
    for chain in chains:
        i0, k0 = chain[0]
        i1, k1 = chain[-1]
        u = _cluster_of(clusters[i0], right=k0).vertex
        v = _cluster_of(clusters[i1 + 1], left=k1).vertex
        sig = {(slabs[i][k].lo_owner, slabs[i][k].hi_owner) for i, k in chain}
        if len(sig) != 1:
            raise GenericityViolation("boundary circle changes along an edge without a singular point")
        mi, mk = chain[len(chain) // 2]
        sx = 0.5 * (crits[mi] + crits[mi + 1])
        raw.append((u, slabs[i0][k0].lo, v, chain, slabs[mi][mk], sx))
    raw.sort(key=lambda q: (q[0], q[1]))
    for eid, (u, _, v, chain, iv, sx) in enumerate(raw):
        edges.append(PREdge(eid, (u, v), (crits[chain[0][0]], crits[chain[-1][0] + 1]), iv, sx))
        for i, k in chain:
            slab_edges[i][k] = eid
    for v in vertices:
        v.degree = 0
    for e in edges:
        vertices[e.endpoints[0]].degree += 1
        vertices[e.endpoints[1]].degree += 1
    for v in vertices:
        v.kind = VertexKind.from_degree(v.degree)
    return PRGraph(axis, vertices, edges, crits, slab_edges, clusters)


def _dist_to(hull, t):
    if t < hull[0]:
        return hull[0] - t
    if t > hull[1]:
        return t - hull[1]
    return 0.0


def _cluster_of(row: list[_Cluster], left: int | None = None, right: int | None = None) -> _Cluster:
    for cl in row:
        if left is not None and left in cl.left:
            return cl
        if right is not None and right in cl.right:
            return cl
    raise GenericityViolation("fiber component lost during the sweep")


def count_components(r: SSRegion, axis: Axis = Axis.HORIZONTAL) -> int:
    g = _build_graph(r, axis)
    parent = list(range(len(g.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in g.edges:
        parent[find(e.endpoints[0])] = find(e.endpoints[1])
    return len({find(v.id) for v in g.vertices})


def _checked_validate(r: SSRegion):
    cache = r.__dict__.setdefault("_graph_cache", {})
    rep = cache.get("validity")
    if rep is None:
        rep = cache["validity"] = validate(r)
    return rep


def compute_pr_graph(r: SSRegion, axis: Axis = Axis.HORIZONTAL) -> PRGraph:
    """Poincare-Reeb graph of a valid region for the given projection."""
    rep = _checked_validate(r)
    if not rep.ok:
        raise InvalidRegion(str(rep))
    return _build_graph(r, axis)


def is_tree(g: PRGraph) -> bool:
    return len(g.vertices) - len(g.edges) == 1 and g.is_connected()


@dataclass(frozen=True)
class GraphLocation:
    vertex: Optional[int] = None
    edge: Optional[int] = None

    @property
    def interior(self) -> bool:
        return self.edge is not None


def locate(r: SSRegion, g: PRGraph, p: Point) -> GraphLocation:
    """Graph element whose fiber component contains p."""
    if classify_point(r, p) is Location.EXTERIOR:
        raise PointOutsideRegion(f"({p.x}, {p.y}) is outside the region")
    eps = r.tol.eps_abs
    s, t = p.coord(g.axis)
    crits = g.crits
    if s < crits[0] - 2 * eps or s > crits[-1] + 2 * eps:
        raise PointOutsideRegion(f"({p.x}, {p.y}) is outside the swept range")
    for i, c in enumerate(crits):
        if abs(s - c) <= 2 * eps:
            row = g.clusters[i]
            cl = min(row, key=lambda q: _dist_to(q.hull, t))
            if cl.vertex is not None:
                return GraphLocation(vertex=cl.vertex)
            return GraphLocation(edge=g.slab_edges[i - 1][cl.left[0]])
    i = max(k for k, c in enumerate(crits) if c < s)
    ivs = fiber_at(r.sweep_circles(g.axis), s, eps)
    if len(ivs) != len(g.slab_edges[i]):
        raise GenericityViolation("fiber at query point disagrees with the sweep")
    k = min(range(len(ivs)), key=lambda q: _dist_to((ivs[q].lo, ivs[q].hi), t))
    return GraphLocation(edge=g.slab_edges[i][k])


# --- edge addresses -------------------------------------------------------

def _address_table(g: PRGraph) -> dict[int, str]:
    table = g.__dict__.get("_addr")
    if table is not None:
        return table
    if not is_tree(g):
        raise NotATree("edge addresses are defined for trees only")
    vkey = {v.id: (v.x, v.interval[0]) for v in g.vertices}
    root = min(g.vertices, key=lambda v: (v.x, v.interval[0])).id
    table = {}
    stack = [(root, -1, "")]
    while stack:
        v, via, prefix = stack.pop()
        kids = sorted(((vkey[w], eid, w) for eid, w in g.neighbors(v) if eid != via))
        for idx, (_, eid, w) in enumerate(kids):
            addr = f"{prefix}/{idx}" if prefix else str(idx)
            table[eid] = addr
            stack.append((w, eid, addr))
    g.__dict__["_addr"] = table
    return table


def edge_address(g: PRGraph, eid: int) -> str:
    """Path of child indices from the leftmost vertex, children sorted by position."""
    return _address_table(g)[eid]


def resolve_edge(g: PRGraph, edge: Union[int, str]) -> int:
    if isinstance(edge, int):
        if not 0 <= edge < len(g.edges):
            raise KeyError(f"no edge {edge}")
        return edge
    for eid, addr in _address_table(g).items():
        if addr == edge:
            return eid
    raise KeyError(f"no edge at address {edge!r}")


# --- pattern checks for the circle operations ----------------------------

def _pattern_candidates(before: PRGraph, e, k: int, pendant_at: Sequence[int]) -> list[str]:
    t = before.as_tree()
    u, v = before.edges[resolve_edge(before, e)].endpoints
    sub, new = subdivide(t, u, v, k)
    if not pendant_at:
        return [canonical_code(sub)]
    return [canonical_code(attach_leaf(sub, new[i])) for i in pendant_at]


def _after_code(after: PRGraph) -> Optional[str]:
    if not is_tree(after):
        return None
    return canonical_code(after)


def check_corollary1(before: PRGraph, after: PRGraph, e) -> bool:
    """after = before with e subdivided twice and a pendant edge at one new vertex."""
    code = _after_code(after)
    return code is not None and code in _pattern_candidates(before, e, 2, (0, 1))


def check_corollary2(before: PRGraph, after: PRGraph, e) -> bool:
    """after = before with e subdivided by exactly two new vertices."""
    code = _after_code(after)
    return code is not None and code in _pattern_candidates(before, e, 2, ())


def check_pair_pattern(before: PRGraph, after: PRGraph, e) -> bool:
    """Net effect of an SSCC followed by a nested MBCC on the same edge."""
    code = _after_code(after)
    return code is not None and code in _pattern_candidates(before, e, 4, (1, 2))

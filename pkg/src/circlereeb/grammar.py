"""The inductive tree family: generator, parameter check, recognizer, enumeration.

Addresses
---------
The construction is organised in *units*.  The root unit ``r`` is a single
edge subdivided ``n0`` times; its path vertices are ``r/0`` .. ``r/{n0+1}``
(both ends are leaves).  Every interior path vertex ``v`` of a unit carries a
pendant unit whose address is ``v`` itself: a single edge hung at ``v`` and
subdivided ``attach[v]`` times.  Its path vertices are ``v`` (index 0, shared
with the parent), ``v/1`` .. ``v/n`` and the leaf ``v/{n+1}``.

Edge ``k`` of unit ``U`` joins path vertices ``k`` and ``k+1`` and is written
``U:k``; the ``i``-th extra vertex put on it by the final subdivision step is
``U:k.i`` (counted from the path-vertex-``k`` side).

Parameter file::

    params v1
    n0 <int>
    attach <vertex-address> <int>
    final <edge-address> <int>
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .errors import BudgetExceeded, InvalidParams, ParseError
from .region import ValidityReport, Violation
from .trees import Tree, canonical_code

MAX_ENUM_VERTICES = 16


@dataclass(frozen=True)
class Unit:
    address: str
    n: int
    pendant: bool

    def vertex(self, k: int) -> str:
        if k == 0 and self.pendant:
            return self.address
        return f"{self.address}/{k}"

    def edge(self, k: int) -> str:
        return f"{self.address}:{k}"

    def edge_j(self, k: int) -> int:
        """Number of degree-3 ends of edge k in the finished skeleton."""
        left = self.pendant or k > 0
        right = k + 1 <= self.n
        return int(left) + int(right)


@dataclass
class GrammarParams:
    n0: int = 0
    attach: dict[str, int] = field(default_factory=dict)
    final: dict[str, int] = field(default_factory=dict)

    def units(self) -> list[Unit]:
        """All units in construction order (breadth first); needs a complete attach map."""
        out = [Unit("r", self.n0, False)]
        i = 0
        while i < len(out):
            u = out[i]
            for k in range(1, u.n + 1):
                v = u.vertex(k)
                if v not in self.attach:
                    raise InvalidParams(f"missing attach value for {v}")
                out.append(Unit(v, self.attach[v], True))
            i += 1
        return out

    def skeleton_edges(self) -> list[str]:
        return [u.edge(k) for u in self.units() for k in range(u.n + 1)]


# --- validation ------------------------------------------------------------

def _unit_violations(u: Unit, counts: list[int]) -> list[str]:
    bad = []
    js = [u.edge_j(k) for k in range(u.n + 1)]
    if u.n == 0:
        if counts[0] % 2:
            bad.append(f"{u.edge(0)} must be even when the unit has no subdivisions")
        return bad
    if u.n % 2 == 0:
        for k, (c, j) in enumerate(zip(counts, js)):
            if c % 2 or c < 2 * j:
                bad.append(f"{u.edge(k)}={c} must be even and at least {2 * j}")
        return bad
    odd = [k for k, c in enumerate(counts) if c % 2]
    if len(odd) != 1:
        bad.append(f"unit {u.address} needs exactly one odd edge, found {len(odd)}")
    for k, (c, j) in enumerate(zip(counts, js)):
        if c < 2 * j:
            bad.append(f"{u.edge(k)}={c} is below the bound {2 * j}")
    return bad


def validate_params(p: GrammarParams) -> ValidityReport:
    rep = ValidityReport()
    add = lambda kind, msg: rep.violations.append(Violation(kind, msg))
    if p.n0 < 0:
        add("range", f"n0={p.n0} is negative")
        return rep
    for k, v in list(p.attach.items()) + list(p.final.items()):
        if v < 0:
            add("range", f"{k}={v} is negative")
    if not rep.ok:
        return rep
    try:
        units = p.units()
    except InvalidParams as exc:
        add("attach", str(exc))
        return rep
    needed = {u.address for u in units if u.pendant}
    for extra in sorted(set(p.attach) - needed):
        add("attach", f"attach value for {extra} which is not an interior vertex")
    edges = [u.edge(k) for u in units for k in range(u.n + 1)]
    for missing in [e for e in edges if e not in p.final]:
        add("final", f"missing final count for {missing}")
    for extra in sorted(set(p.final) - set(edges)):
        add("final", f"final count for unknown edge {extra}")
    if not rep.ok:
        return rep
    for u in units:
        for msg in _unit_violations(u, [p.final[u.edge(k)] for k in range(u.n + 1)]):
            add("parity", msg)
    return rep


# --- generation ------------------------------------------------------------

def build(p: GrammarParams, final: Optional[dict[str, int]] = None) -> tuple[Tree, dict[str, int]]:
    """Tree and address -> vertex id map, without checking the parity rules."""
    final = p.final if final is None else final
    ids: dict[str, int] = {}

    def vid(addr):
        if addr not in ids:
            ids[addr] = len(ids)
        return ids[addr]

    edges = []
    for u in p.units():
        for k in range(u.n + 1):
            a, b = u.vertex(k), u.vertex(k + 1)
            chain = [vid(a)]
            for i in range(final.get(u.edge(k), 0)):
                chain.append(vid(f"{u.edge(k)}.{i + 1}"))
            chain.append(vid(b))
            edges.extend(zip(chain, chain[1:]))
    return Tree(len(ids), tuple(edges)), ids


def generate(p: GrammarParams) -> Tree:
    rep = validate_params(p)
    if not rep.ok:
        raise InvalidParams(str(rep))
    return build(p)[0]


# --- recognition -----------------------------------------------------------

@dataclass
class Certificate:
    params: GrammarParams
    embedding: dict[str, int]
    accepted: bool = True


@dataclass
class Reject:
    reason: str
    accepted: bool = False


def recognize(t: Tree):
    """Certificate when t belongs to the family, otherwise a Reject with a reason."""
    deg = t.degrees()
    if max(deg, default=0) >= 4:
        return Reject(f"vertex {deg.index(max(deg))} has degree {max(deg)}")
    if t.n == 1:
        return Reject("a single vertex is not generated")
    skel = [v for v in range(t.n) if deg[v] != 2]
    # skeleton edges: walk through degree-2 vertices
    sk_adj: dict[int, list[tuple[int, list[int]]]] = {v: [] for v in skel}
    for v in skel:
        for w in t.adj[v]:
            prev, cur, inner = v, w, []
            while deg[cur] == 2:
                inner.append(cur)
                nxt = t.adj[cur][0] if t.adj[cur][0] != prev else t.adj[cur][1]
                prev, cur = cur, nxt
            sk_adj[v].append((cur, inner))
    leaves = [v for v in skel if deg[v] == 1]

    def inner_of(a, b):
        for w, inner in sk_adj[a]:
            if w == b:
                return inner
        raise KeyError((a, b))

    def unit_ok(path: list[int], pendant: bool) -> bool:
        u = Unit("u", len(path) - 2, pendant)
        counts = [len(inner_of(a, b)) for a, b in zip(path, path[1:])]
        return not _unit_violations(u, counts)

    @lru_cache(maxsize=None)
    def branch(p: int, c: int) -> Optional[tuple]:
        """A working unit path for the pendant from p through c, as nested choices."""
        for path in _paths_to_leaves(p, c):
            if not unit_ok(path, True):
                continue
            subs = []
            for k in range(1, len(path) - 1):
                side = [w for w, _ in sk_adj[path[k]] if w not in (path[k - 1], path[k + 1])][0]
                got = branch(path[k], side)
                if got is None:
                    break
                subs.append(got)
            else:
                return (tuple(path), tuple(subs))
        return None

    def _paths_to_leaves(p, c):
        out = []
        stack = [[p, c]]
        while stack:
            path = stack.pop()
            last = path[-1]
            if deg[last] == 1:
                out.append(path)
                continue
            for w, _ in sk_adj[last]:
                if w != path[-2]:
                    stack.append(path + [w])
        out.sort()
        return out

    found = None
    for a, b in itertools.combinations(sorted(leaves), 2):
        spine = _spine(sk_adj, a, b)
        if not unit_ok(spine, False):
            continue
        subs = []
        for k in range(1, len(spine) - 1):
            side = [w for w, _ in sk_adj[spine[k]] if w not in (spine[k - 1], spine[k + 1])][0]
            got = branch(spine[k], side)
            if got is None:
                break
            subs.append(got)
        else:
            found = (tuple(spine), tuple(subs))
            break
    if found is None:
        if len(skel) == 2:
            return Reject(f"path with {t.n - 2} interior vertices; the count must be even")
        return Reject("no choice of spine and pendant paths meets the parity and bound rules")

    params = GrammarParams(len(found[0]) - 2)
    embedding: dict[str, int] = {}

    def emit(unit: Unit, path, subs):
        for k, v in enumerate(path):
            embedding[unit.vertex(k)] = v
        for k, (a, b) in enumerate(zip(path, path[1:])):
            inner = inner_of(a, b)
            params.final[unit.edge(k)] = len(inner)
            for i, w in enumerate(inner):
                embedding[f"{unit.edge(k)}.{i + 1}"] = w
        for k, (sp, ss) in enumerate(subs, start=1):
            addr = unit.vertex(k)
            params.attach[addr] = len(sp) - 2
            emit(Unit(addr, len(sp) - 2, True), sp, ss)

    emit(Unit("r", params.n0, False), *found)
    return Certificate(params, embedding)


def _spine(sk_adj, a, b) -> list[int]:
    prev = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        for w, _ in sk_adj[v]:
            if w not in prev:
                prev[w] = v
                stack.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


# --- enumeration -----------------------------------------------------------

def _attach_structures(budget: int):
    """(n0, attach) pairs whose skeleton has at most `budget` vertices."""
    def fill(pending: list[str], attach: dict, used: int):
        if not pending:
            yield dict(attach)
            return
        v, rest = pending[0], pending[1:]
        n = 0
        while used + n + 1 <= budget:
            attach[v] = n
            yield from fill(rest + [f"{v}/{k}" for k in range(1, n + 1)], attach, used + n + 1)
            del attach[v]
            n += 1

    n0 = 0
    while n0 + 2 <= budget:
        for att in fill([f"r/{k}" for k in range(1, n0 + 1)], {}, n0 + 2):
            yield n0, att
        n0 += 1


def _unit_choices(u: Unit, budget: int):
    """Admissible count vectors for one unit with total at most budget."""
    m = u.n + 1
    js = [u.edge_j(k) for k in range(m)]

    def rec(k, left, acc):
        if k == m:
            if not _unit_violations(u, acc):
                yield tuple(acc)
            return
        lo = 0 if u.n == 0 else 2 * js[k]
        for c in range(lo, left + 1):
            yield from rec(k + 1, left - c, acc + [c])

    yield from rec(0, budget, [])


def enumerate_family(max_vertices: int) -> list[tuple[str, GrammarParams]]:
    if max_vertices > MAX_ENUM_VERTICES:
        raise BudgetExceeded(f"enumeration is limited to {MAX_ENUM_VERTICES} vertices")
    seen: dict[str, GrammarParams] = {}
    for n0, attach in _attach_structures(max_vertices):
        p = GrammarParams(n0, attach, {})
        units = p.units()
        skeleton = 2 + sum(u.n + 1 for u in units if u.pendant) + n0
        spare = max_vertices - skeleton

        def assign(i, left, final):
            if i == len(units):
                yield dict(final)
                return
            u = units[i]
            for counts in _unit_choices(u, left):
                for k, c in enumerate(counts):
                    final[u.edge(k)] = c
                yield from assign(i + 1, left - sum(counts), final)
            for k in range(u.n + 1):
                final.pop(u.edge(k), None)

        for final in assign(0, spare, {}):
            q = GrammarParams(n0, dict(attach), final)
            code = canonical_code(generate(q))
            seen.setdefault(code, q)
    return sorted(seen.items(), key=lambda kv: (len(kv[0]), kv[0]))


# --- text format -----------------------------------------------------------

def format_params(p: GrammarParams) -> str:
    lines = ["params v1", f"n0 {p.n0}"]
    lines += [f"attach {k} {v}" for k, v in p.attach.items()]
    lines += [f"final {k} {v}" for k, v in p.final.items()]
    return "\n".join(lines) + "\n"


def parse_params(text: str) -> GrammarParams:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "params v1":
        raise ParseError("missing 'params v1' header")
    p = GrammarParams()
    for ln in lines[1:]:
        parts = ln.split()
        try:
            if parts[0] == "n0" and len(parts) == 2:
                p.n0 = int(parts[1])
            elif parts[0] in ("attach", "final") and len(parts) == 3:
                getattr(p, parts[0])[parts[1]] = int(parts[2])
            else:
                raise ParseError(f"malformed line: {ln!r}")
        except ValueError:
            raise ParseError(f"bad integer in {ln!r}") from None
    return p

"""Abstract finite trees and their canonical (AHU) codes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import NotATree, ParseError


@dataclass(frozen=True)
class Tree:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise NotATree("a tree needs at least one vertex")
        if len(self.edges) != self.n - 1:
            raise NotATree(f"{self.n} vertices but {len(self.edges)} edges")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise NotATree(f"bad edge ({u}, {v})")
        seen = {0}
        stack = [0]
        adj = self.adj
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.n:
            raise NotATree("graph is not connected")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None) -> "Tree":
        edges = tuple((int(u), int(v)) for u, v in edges)
        if n is None:
            n = 1 + max((max(e) for e in edges), default=0)
        return cls(n, edges)

    @classmethod
    def path(cls, n: int) -> "Tree":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> "Tree":
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nb = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def relabel(self, perm: Sequence[int]) -> "Tree":
        return Tree(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def centers(self) -> list[int]:
        if self.n <= 2:
            return list(range(self.n))
        deg = self.degrees()
        layer = [v for v in range(self.n) if deg[v] == 1]
        remaining = self.n
        while remaining > 2:
            remaining -= len(layer)
            nxt = []
            for v in layer:
                for w in self.adj[v]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
            layer = nxt
        return sorted(layer)

    def rooted_code(self, root: int, labels: Sequence[str] | None = None) -> str:
        parent = {root: -1}
        order = [root]
        for u in order:
            for w in self.adj[u]:
                if w != parent[u]:
                    parent[w] = u
                    order.append(w)
        codes: dict[int, str] = {}
        for u in reversed(order):
            kids = sorted(codes[w] for w in self.adj[u] if w != parent[u])
            tag = labels[u] if labels is not None else ""
            codes[u] = "(" + tag + "".join(kids) + ")"
        return codes[root]

    def canonical_code(self, labels: Sequence[str] | None = None) -> str:
        return min(self.rooted_code(c, labels) for c in self.centers())


def canonical_code(t, labels: Sequence[str] | None = None) -> str:
    """Center-rooted AHU code; equal codes exactly for isomorphic trees.

    Accepts a Tree or anything with an ``as_tree()`` method (a PRGraph).
    """
    if not isinstance(t, Tree):
        t = t.as_tree()
    return t.canonical_code(labels)


def subdivide(t: Tree, u: int, v: int, k: int) -> tuple[Tree, list[int]]:
    """Replace edge (u, v) by a path with k new interior vertices (u side first)."""
    edges = [e for e in t.edges if set(e) != {u, v}]
    if len(edges) != len(t.edges) - 1:
        raise ValueError(f"({u}, {v}) is not an edge")
    new = list(range(t.n, t.n + k))
    chain = [u] + new + [v]
    edges.extend(zip(chain, chain[1:]))
    return Tree(t.n + k, tuple(edges)), new


def attach_leaf(t: Tree, v: int) -> Tree:
    return Tree(t.n + 1, t.edges + ((v, t.n),))


def format_tree(t: Tree, comments: Sequence[str] = ()) -> str:
    lines = ["tree v1"]
    lines.extend("# " + c for c in comments)
    lines.extend(f"edge {u} {v}" for u, v in t.edges)
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> Tree:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "tree v1":
        raise ParseError("missing 'tree v1' header")
    edges = []
    ids = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "edge":
            raise ParseError(f"malformed line: {ln!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"malformed line: {ln!r}") from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {ln!r}")
        edges.append((u, v))
        ids.update((u, v))
    if not edges:
        raise ParseError("tree file has no edges")
    # compact ids so that sparse labels still form a tree
    remap = {old: new for new, old in enumerate(sorted(ids))}
    try:
        return Tree(len(remap), tuple((remap[u], remap[v]) for u, v in edges))
    except NotATree as exc:
        raise ParseError(f"not a tree: {exc}") from None

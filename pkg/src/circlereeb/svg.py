"""Byte-stable SVG pictures of a region with an optional graph overlay.

Gray fill for the region, black for its boundary arcs, red for the graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .geom import Axis
from .reeb import PRGraph
from .region import SSRegion, boundary_arcs


@dataclass(frozen=True)
class RenderOptions:
    width: int = 480
    height: int = 480
    stroke: float = 1.5
    overlay: bool = True
    axis: Axis = Axis.HORIZONTAL

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image size must be positive")


def _n(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _frame(r: SSRegion):
    ins = [c.circle for c in r.constraints if c.inside]
    x0 = max(c.center.x - c.radius for c in ins)
    x1 = min(c.center.x + c.radius for c in ins)
    y0 = max(c.center.y - c.radius for c in ins)
    y1 = min(c.center.y + c.radius for c in ins)
    pad = 0.05 * max(x1 - x0, y1 - y0)
    return x0 - pad, x1 + pad, y0 - pad, y1 + pad


def render(r: SSRegion, g: Optional[PRGraph] = None, opts: RenderOptions = RenderOptions()) -> str:
    x0, x1, y0, y1 = _frame(r)
    scale = min(opts.width / (x1 - x0), opts.height / (y1 - y0))

    def X(x):
        return _n((x - x0) * scale)

    def Y(y):
        return _n((y1 - y) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{opts.width}" height="{opts.height}" '
           f'viewBox="0 0 {opts.width} {opts.height}">']
    out.append("<defs>")
    out.append('<mask id="keep">')
    out.append(f'<rect x="0" y="0" width="{opts.width}" height="{opts.height}" fill="black"/>')
    out.append('<g fill="white">')
    # nested clip paths intersect the kept disks
    inside = [c.circle for c in r.constraints if c.inside]
    outside = [c.circle for c in r.constraints if not c.inside]
    out.append(f'<rect x="0" y="0" width="{opts.width}" height="{opts.height}" clip-path="url(#clip{len(inside) - 1})"/>')
    out.append("</g>")
    for c in outside:
        out.append(f'<circle cx="{X(c.center.x)}" cy="{Y(c.center.y)}" r="{_n(c.radius * scale)}" fill="black"/>')
    out.append("</mask>")
    for k, c in enumerate(inside):
        parent = f' clip-path="url(#clip{k - 1})"' if k else ""
        out.append(f'<clipPath id="clip{k}"><circle cx="{X(c.center.x)}" cy="{Y(c.center.y)}" '
                   f'r="{_n(c.radius * scale)}"{parent}/></clipPath>')
    out.append("</defs>")
    out.append(f'<rect x="0" y="0" width="{opts.width}" height="{opts.height}" fill="#bbbbbb" mask="url(#keep)"/>')

    out.append(f'<g fill="none" stroke="black" stroke-width="{_n(opts.stroke)}">')
    for j, hc in enumerate(r.constraints):
        c = hc.circle
        rr = _n(c.radius * scale)
        for a, b in boundary_arcs(r, j):
            if b - a >= 2 * math.pi - 1e-12:
                out.append(f'<circle cx="{X(c.center.x)}" cy="{Y(c.center.y)}" r="{rr}"/>')
                continue
            p, q = c.point_at(a), c.point_at(b)
            large = 1 if b - a > math.pi else 0
            # y is flipped, so counter-clockwise becomes sweep flag 0
            out.append(f'<path d="M {X(p.x)} {Y(p.y)} A {rr} {rr} 0 {large} 0 {X(q.x)} {Y(q.y)}"/>')
    out.append("</g>")

    if g is not None and opts.overlay:
        def pos(s, t):
            return (s, t) if g.axis is Axis.HORIZONTAL else (t, s)

        out.append(f'<g stroke="#c00000" stroke-width="{_n(opts.stroke)}" fill="none">')
        for e in g.edges:
            a, b = (g.vertices[v] for v in e.endpoints)
            mid = pos(e.sample_x, 0.5 * (e.sample_interval.lo + e.sample_interval.hi))
            pts = [pos(a.x, 0.5 * sum(a.interval)), mid, pos(b.x, 0.5 * sum(b.interval))]
            d = " ".join(f"{X(x)},{Y(y)}" for x, y in pts)
            out.append(f'<polyline points="{d}"/>')
        out.append("</g>")
        out.append('<g fill="#c00000">')
        for v in g.vertices:
            x, y = pos(v.x, 0.5 * sum(v.interval))
            out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="{_n(2 * opts.stroke)}"><title>{v.kind.value}</title></circle>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

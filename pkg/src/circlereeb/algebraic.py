"""Polynomial systems attached to an SS-region (text emission only)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidSpec
from .io import fmt
from .region import SSRegion

MONOMIALS = ("1", "x1", "x2", "x1^2", "x1*x2", "x2^2")


def quadric(r: SSRegion, j: int) -> tuple[float, ...]:
    """Coefficients of f_j in monomial order; f_j > 0 exactly on the kept side."""
    c = r.constraints[j]
    cx, cy, rad = c.circle.center.x, c.circle.center.y, c.circle.radius
    co = (rad * rad - cx * cx - cy * cy, 2 * cx, 2 * cy, -1.0, 0.0, -1.0)
    if not c.inside:
        co = tuple(-v for v in co)
    return tuple(v + 0.0 for v in co)  # normalise -0.0


def evaluate(co: Sequence[float], x1: float, x2: float) -> float:
    mons = (1.0, x1, x2, x1 * x1, x1 * x2, x2 * x2)
    return sum(a * m for a, m in zip(co, mons))


def format_poly(co: Sequence[float]) -> str:
    out = []
    for a, mon in zip(co, MONOMIALS):
        if a == 0:
            continue
        mag = abs(a)
        if mon == "1":
            body = fmt(mag)
        elif mag == 1:
            body = mon
        else:
            body = f"{fmt(mag)}*{mon}"
        if not out:
            out.append(body if a > 0 else "-" + body)
        else:
            out.append(("+ " if a > 0 else "- ") + body)
    return " ".join(out) if out else "0"


def emit_f_polynomials(r: SSRegion) -> list[str]:
    return [format_poly(quadric(r, j)) for j in range(len(r.constraints))]


@dataclass
class AlgebraicModelSpec:
    """labeling: constraint index (1-based) -> class; degrees: class -> d(i) >= 1."""

    labeling: dict[int, int] = field(default_factory=dict)
    degrees: dict[int, int] = field(default_factory=dict)

    @classmethod
    def default(cls, r: SSRegion) -> "AlgebraicModelSpec":
        n = len(r.constraints)
        return cls({j: j for j in range(1, n + 1)}, {i: 1 for i in range(1, n + 1)})

    @property
    def classes(self) -> int:
        return len(set(self.labeling.values()))

    def ambient_dim(self) -> int:
        return self.classes + 2 + sum(self.degrees.values())


def check_spec(r: SSRegion, spec: AlgebraicModelSpec) -> None:
    n = len(r.constraints)
    if not spec.labeling:
        raise InvalidSpec("labeling is empty")
    if set(spec.labeling) != set(range(1, n + 1)):
        raise InvalidSpec(f"labeling must cover constraints 1..{n}")
    vals = sorted(spec.labeling.values())
    lp = len(set(vals))
    if set(vals) != set(range(1, lp + 1)):
        raise InvalidSpec(f"labeling must map onto 1..{lp}")
    # distinct circles need distinct values, so the map has to be one-to-one
    if lp != n:
        raise InvalidSpec("labeling sends two circles to the same value")
    if set(spec.degrees) != set(range(1, lp + 1)):
        raise InvalidSpec(f"degrees must be given for classes 1..{lp}")
    bad = [i for i, d in spec.degrees.items() if not isinstance(d, int) or d < 1]
    if bad:
        raise InvalidSpec(f"degree below 1 for classes {bad}")


def emit_model(r: SSRegion, spec: Optional[AlgebraicModelSpec] = None) -> str:
    spec = AlgebraicModelSpec.default(r) if spec is None else spec
    check_spec(r, spec)
    polys = emit_f_polynomials(r)
    lines = [f"ambient_dim {spec.ambient_dim()}"]
    for i in range(1, spec.classes + 1):
        members = sorted(j for j, v in spec.labeling.items() if v == i)
        if len(members) == 1:
            prod = polys[members[0] - 1]
        else:
            prod = "*".join(f"({polys[j - 1]})" for j in members)
        ys = " ".join(f"- y{i}_{k}^2" for k in range(1, spec.degrees[i] + 2))
        lines.append(f"{prod} {ys} = 0")
    return "\n".join(lines) + "\n"


def parse_spec(text: str) -> AlgebraicModelSpec:
    """Lines 'label <j> <i>' and 'degree <i> <d>'; '#' starts a comment."""
    from .errors import ParseError

    spec = AlgebraicModelSpec()
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 3 or parts[0] not in ("label", "degree"):
            raise ParseError(f"malformed line: {ln!r}")
        try:
            a, b = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"bad integer in {ln!r}") from None
        (spec.labeling if parts[0] == "label" else spec.degrees)[a] = b
    return spec

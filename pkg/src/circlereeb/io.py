"""Text formats for regions and plans, plus whole-file atomic writes."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from .errors import ParseError
from .geom import Circle, Point, Tolerance, default_tolerance
from .ops import OpKind, OpRecord, Plan
from .region import HalfConstraint, Side, SSRegion


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- regions ---------------------------------------------------------------

def format_region(r: SSRegion) -> str:
    lines = ["ssregion v1"]
    for c in r.constraints:
        ci = c.circle
        lines.append(f"circle {c.side.value} {fmt(ci.center.x)} {fmt(ci.center.y)} {fmt(ci.radius)}")
    lines.append(f"seed {fmt(r.seed.x)} {fmt(r.seed.y)}")
    if r.tol.eps_abs != Tolerance().eps_abs:
        lines.append(f"tol {fmt(r.tol.eps_abs)}")
    return "\n".join(lines) + "\n"


def _floats(parts, n, line):
    if len(parts) != n:
        raise ParseError(f"expected {n} numbers in {line!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ParseError(f"bad number in {line!r}") from None


def _region_lines(lines: list[str]) -> SSRegion:
    if not lines or lines[0] != "ssregion v1":
        raise ParseError("missing 'ssregion v1' header")
    cons, seed, eps = [], None, None
    for ln in lines[1:]:
        parts = ln.split()
        head = parts[0]
        if head == "circle":
            if len(parts) < 2:
                raise ParseError(f"malformed line: {ln!r}")
            try:
                side = Side(parts[1])
            except ValueError:
                raise ParseError(f"unknown side {parts[1]!r}") from None
            cx, cy, rad = _floats(parts[2:], 3, ln)
            try:
                cons.append(HalfConstraint(Circle.of(cx, cy, rad), side))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        elif head == "seed":
            try:
                seed = Point(*_floats(parts[1:], 2, ln))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        elif head == "tol":
            (eps,) = _floats(parts[1:], 1, ln)
        else:
            raise ParseError(f"malformed line: {ln!r}")
    if not cons:
        raise ParseError("region has no circles")
    if seed is None:
        raise ParseError("region has no seed line")
    try:
        tol = Tolerance(eps_abs=eps) if eps is not None else default_tolerance()
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return SSRegion(tuple(cons), seed, tol)


def _clean(text: str) -> list[str]:
    out = []
    for ln in text.splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            out.append(ln)
    return out


def parse_region(text: str) -> SSRegion:
    return _region_lines(_clean(text))


# --- plans -----------------------------------------------------------------

def format_record(rec: OpRecord) -> str:
    params = " ".join(f"{k}={fmt(v)}" for k, v in rec.params)
    return f"{rec.kind.value} host={rec.host} edge={rec.edge} {params}"


def format_plan(plan: Plan) -> str:
    lines = ["plan v1"]
    if format_region(plan.base) != format_region(SSRegion.unit_disk()):
        lines.append("base")
        lines.extend(format_region(plan.base).splitlines())
        lines.append("end")
    lines.extend(format_record(s) for s in plan.steps)
    return "\n".join(lines) + "\n"


def parse_record(line: str) -> OpRecord:
    parts = line.split()
    try:
        kind = OpKind(parts[0])
    except ValueError:
        raise ParseError(f"unknown step kind in {line!r}") from None
    fields = {}
    order = []
    for p in parts[1:]:
        if "=" not in p:
            raise ParseError(f"expected name=value in {line!r}")
        k, v = p.split("=", 1)
        fields[k] = v
        order.append(k)
    if "host" not in fields or "edge" not in fields:
        raise ParseError(f"step needs host= and edge=: {line!r}")
    try:
        host = int(fields["host"])
        params = tuple((k, float(fields[k])) for k in order if k not in ("host", "edge"))
    except ValueError:
        raise ParseError(f"bad number in {line!r}") from None
    need = ("theta", "radius") if kind is OpKind.MBCC else ("theta1", "theta2", "sagitta")
    if kind is OpKind.MBSSCC_PAIR or any(n not in dict(params) for n in need):
        raise ParseError(f"step is missing parameters: {line!r}")
    return OpRecord(kind, host, fields["edge"], params)


def parse_plan(text: str) -> Plan:
    lines = _clean(text)
    if not lines or lines[0] != "plan v1":
        raise ParseError("missing 'plan v1' header")
    rest = lines[1:]
    base = SSRegion.unit_disk(default_tolerance())
    if rest and rest[0] == "base":
        try:
            end = rest.index("end")
        except ValueError:
            raise ParseError("unterminated base block") from None
        base = _region_lines(rest[1:end])
        rest = rest[end + 1:]
    return Plan(base, [parse_record(ln) for ln in rest])

"""Seeded random operation sequences with per-step invariant checks and shrinking."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .errors import CircleReebError, OperationError
from .geom import Axis
from .ops import OpKind, OpRecord, Plan, apply_op, apply_record
from .reeb import check_corollary1, check_corollary2, compute_pr_graph, is_tree
from .region import SSRegion, validate

FUZZ_KINDS = (OpKind.MBCC, OpKind.SSCC_A1, OpKind.SSCC_A2, OpKind.SSCC_B)


class InvariantFailure(AssertionError):
    pass


@dataclass
class StepEvent:
    kind: OpKind
    edge: str
    applied: bool
    values: list[float] = field(default_factory=list)
    reason: str = ""


@dataclass
class FuzzCase:
    index: int
    plan: Plan
    region: SSRegion
    events: list[StepEvent]
    failure: Optional[str] = None


def _check_step(before: SSRegion, after: SSRegion, rec: OpRecord, values: list[float]):
    """Raise InvariantFailure unless the step left a valid tree with the expected edit."""
    if not validate(after).ok:
        raise InvariantFailure(f"invalid region after {rec.kind.value}: {validate(after)}")
    g0 = compute_pr_graph(before, Axis.HORIZONTAL)
    g1 = compute_pr_graph(after, Axis.HORIZONTAL)
    compute_pr_graph(after, Axis.VERTICAL)
    if len(g1.vertices) - len(g1.edges) != 1 or not is_tree(g1):
        raise InvariantFailure(f"graph is not a tree after {rec.kind.value}")
    eps = before.tol.eps_abs
    if any(b - a <= 2 * eps for a, b in zip(values, values[1:])):
        raise InvariantFailure(f"singular values not strictly increasing: {values}")
    if rec.kind is OpKind.MBCC:
        if len(values) != 3 or not check_corollary1(g0, g1, rec.edge):
            raise InvariantFailure(f"mbcc on {rec.edge} broke the pendant pattern")
    else:
        if len(values) != 2 or not check_corollary2(g0, g1, rec.edge):
            raise InvariantFailure(f"{rec.kind.value} on {rec.edge} broke the subdivision pattern")
    if len(after.constraints) != len(before.constraints) + 1:
        raise InvariantFailure("constraint count did not grow by one")


def _pick_edge(rng: random.Random, r: SSRegion, kind: OpKind) -> str:
    from .reeb import edge_address

    g = compute_pr_graph(r, Axis.HORIZONTAL)
    ids = [e.id for e in g.edges]
    if kind is OpKind.SSCC_B:
        concave = [e.id for e in g.edges
                   if any(o is not None and not r.constraints[o[0]].inside
                          for o in (e.top_owner, e.bottom_owner))]
        ids = concave or ids
    return edge_address(g, rng.choice(ids))


def random_case(seed: int, index: int, steps: int,
                kinds=FUZZ_KINDS, on_step: Optional[Callable] = None) -> FuzzCase:
    rng = random.Random(f"{seed}/{index}")
    r = SSRegion.unit_disk()
    plan = Plan(r, [])
    events = []
    for _ in range(steps):
        kind = rng.choice(kinds)
        edge = _pick_edge(rng, r, kind)
        try:
            r2, recs, rep = apply_op(r, kind, edge)
        except OperationError as exc:
            events.append(StepEvent(kind, edge, False, reason=type(exc).__name__))
            continue
        rec = recs[0]
        try:
            _check_step(r, r2, rec, rep.new_singular_values)
        except (InvariantFailure, CircleReebError) as exc:
            plan.steps.append(rec)
            return FuzzCase(index, plan, r2, events, failure=str(exc))
        if on_step is not None:
            on_step(r, r2, rec, rep)
        plan.steps.append(rec)
        events.append(StepEvent(kind, edge, True, rep.new_singular_values))
        r = r2
    return FuzzCase(index, plan, r, events)


def _fails(plan: Plan) -> bool:
    r = plan.base
    try:
        for rec in plan.steps:
            r2 = apply_record(r, rec, check=False)
            _check_step(r, r2, rec, _values_of(r2, len(r2.constraints) - 1))
            r = r2
    except (InvariantFailure, CircleReebError):
        return True
    except (KeyError, ValueError):
        return False
    return False


def _values_of(r: SSRegion, j: int) -> list[float]:
    from .region import singular_points

    return sorted(sp.location.x for sp in singular_points(r, Axis.HORIZONTAL) if j in sp.circles)


def shrink(plan: Plan) -> Plan:
    """Shortest failing prefix, then drop single steps while the failure persists."""
    steps = list(plan.steps)
    for n in range(1, len(steps) + 1):
        if _fails(Plan(plan.base, steps[:n])):
            steps = steps[:n]
            break
    i = 0
    while i < len(steps) - 1:
        trial = steps[:i] + steps[i + 1:]
        if _fails(Plan(plan.base, trial)):
            steps = trial
        else:
            i += 1
    return Plan(plan.base, steps)


@dataclass
class FuzzSummary:
    seed: int
    steps: int
    count: int
    applied: dict[str, int] = field(default_factory=dict)
    skipped: dict[str, int] = field(default_factory=dict)
    failures: list[tuple[int, str, str]] = field(default_factory=list)

    def text(self) -> str:
        lines = [f"fuzz seed={self.seed} steps={self.steps} count={self.count}"]
        for k in FUZZ_KINDS:
            lines.append(f"{k.value} applied={self.applied.get(k.value, 0)} "
                         f"skipped={self.skipped.get(k.value, 0)}")
        lines.append(f"failures {len(self.failures)}")
        for idx, msg, path in self.failures:
            lines.append(f"failure case={idx} plan={path} reason={msg}")
        return "\n".join(lines) + "\n"


def run_fuzz(steps: int, seed: int, count: int, out_dir: Optional[Path] = None,
             kinds=FUZZ_KINDS) -> FuzzSummary:
    from .io import format_plan, write_atomic

    summary = FuzzSummary(seed, steps, count)
    for i in range(count):
        case = random_case(seed, i, steps, kinds)
        for ev in case.events:
            bucket = summary.applied if ev.applied else summary.skipped
            bucket[ev.kind.value] = bucket.get(ev.kind.value, 0) + 1
        if case.failure is not None:
            small = shrink(case.plan)
            path = ""
            if out_dir is not None:
                p = Path(out_dir) / f"fuzz-{seed}-{i}.plan"
                write_atomic(p, format_plan(small))
                path = str(p)
            summary.failures.append((i, case.failure, path))
    return summary

"""Command line entry point.

Exit codes: 0 success, 1 invalid input or failed check, 2 parse error,
3 tree outside the family, 4 geometric search failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import (
    CircleReebError,
    GeometricSearchFailed,
    InvalidParams,
    InvalidRegion,
    InvalidSpec,
    NotInFamily,
    OperationError,
    ParseError,
    ReplayDivergence,
    VerificationFailed,
)
from .geom import Axis

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_NOT_IN_FAMILY, EXIT_GEOMETRY = 0, 1, 2, 3, 4


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out) -> None:
    from .io import write_atomic

    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _load_region(path):
    from .io import parse_region

    return parse_region(_read(path))


def _axis(s: str) -> Axis:
    return Axis.HORIZONTAL if s == "h" else Axis.VERTICAL


def graph_text(g, r=None) -> str:
    from .reeb import edge_address, is_tree
    from .trees import format_tree

    notes = [f"axis {'h' if g.axis is Axis.HORIZONTAL else 'v'}"]
    notes += [f"vertex {v.id} {v.kind.value} at {v.x:.6g}" for v in g.vertices]
    if is_tree(g):
        notes += [f"edge {e.id} address {edge_address(g, e.id)}" for e in g.edges]
    from .trees import Tree

    t = Tree(len(g.vertices), tuple(e.endpoints for e in g.edges))
    return format_tree(t, notes)


# --- subcommands -----------------------------------------------------------

def cmd_validate(a) -> int:
    from .region import validate

    r = _load_region(a.region)
    rep = validate(r)
    if rep.ok:
        print(f"ok: {len(r.constraints)} circles")
        return EXIT_OK
    print(str(rep))
    return EXIT_FAIL


def cmd_reeb(a) -> int:
    from .reeb import compute_pr_graph
    from .svg import RenderOptions, render
    from .io import write_atomic

    r = _load_region(a.region)
    g = compute_pr_graph(r, _axis(a.axis))
    _emit(graph_text(g, r), a.out)
    if a.svg:
        write_atomic(a.svg, render(r, g, RenderOptions(axis=g.axis)))
    return EXIT_OK


def cmd_op(a) -> int:
    from .io import format_plan, format_region, format_record, parse_plan, write_atomic
    from .ops import OpKind, Plan, apply_op

    r = _load_region(a.region)
    kw = {}
    if a.window:
        kw["window"] = tuple(a.window)
    edge = int(a.edge) if a.edge.isdigit() and "/" not in a.edge and a.by_id else a.edge
    r2, recs, rep = apply_op(r, OpKind(a.op), edge, **kw)
    _emit(format_region(r2), a.out)
    if a.plan_append:
        p = Path(a.plan_append)
        plan = parse_plan(_read(p)) if p.exists() else Plan(r, [])
        plan.steps.extend(recs)
        write_atomic(p, format_plan(plan))
    for rec in recs:
        print(format_record(rec), file=sys.stderr)
    print("values " + " ".join(f"{v:.17g}" for v in rep.new_singular_values), file=sys.stderr)
    return EXIT_OK


def cmd_replay(a) -> int:
    from .io import format_region, parse_plan
    from .ops import replay

    plan = parse_plan(_read(a.plan))
    r = replay(plan, check=not a.no_check)
    _emit(format_region(r), a.out)
    return EXIT_OK


def cmd_gen_tree(a) -> int:
    from .grammar import generate, parse_params
    from .trees import canonical_code, format_tree

    t = generate(parse_params(_read(a.params)))
    _emit(format_tree(t, [f"code {canonical_code(t)}"]), a.out)
    return EXIT_OK


def cmd_recognize(a) -> int:
    from .grammar import format_params, recognize
    from .trees import parse_tree

    res = recognize(parse_tree(_read(a.tree)))
    if not res.accepted:
        print(f"reject: {res.reason}")
        return EXIT_NOT_IN_FAMILY
    _emit(format_params(res.params), a.out)
    return EXIT_OK


def cmd_realize(a) -> int:
    from .io import format_plan, format_region, write_atomic
    from .planner import realize, verify
    from .reeb import compute_pr_graph
    from .svg import render
    from .trees import parse_tree

    t = parse_tree(_read(a.tree))
    res = realize(t)
    ok = verify(res)
    out = Path(a.out_dir)
    g = compute_pr_graph(res.region, Axis.HORIZONTAL)
    write_atomic(out / "plan.txt", format_plan(res.plan))
    write_atomic(out / "region.txt", format_region(res.region))
    write_atomic(out / "graph.txt", graph_text(g))
    write_atomic(out / "region.svg", render(res.region, g))
    if not ok:
        write_atomic(out / "record.txt", "unverified\n")
        print("verification failed after replay")
        return EXIT_FAIL
    write_atomic(out / "record.txt", res.record() + "\n")
    print(res.record())
    return EXIT_OK


def cmd_fuzz(a) -> int:
    from .fuzz import run_fuzz

    s = run_fuzz(a.steps, a.seed, a.count, Path(a.out_dir) if a.out_dir else None)
    sys.stdout.write(s.text())
    return EXIT_FAIL if s.failures else EXIT_OK


def cmd_emit_algebraic(a) -> int:
    from .algebraic import emit_f_polynomials, emit_model, parse_spec

    r = _load_region(a.region)
    if a.polys:
        _emit("\n".join(emit_f_polynomials(r)) + "\n", a.out)
        return EXIT_OK
    spec = parse_spec(_read(a.spec)) if a.spec else None
    _emit(emit_model(r, spec), a.out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circlereeb", description="Reeb graphs of regions bounded by circles.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log search progress to stderr")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check a region file")
    p.add_argument("region")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("reeb", help="compute a graph")
    p.add_argument("region")
    p.add_argument("--axis", choices=("h", "v"), default="h")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(fn=cmd_reeb)

    p = sub.add_parser("op", help="add one circle (or a pair)")
    p.add_argument("region")
    p.add_argument("--op", required=True, choices=("mbcc", "sscc-a1", "sscc-a2", "sscc-b", "pair"))
    p.add_argument("--edge", required=True, help="edge address such as 0/1")
    p.add_argument("--by-id", action="store_true", help="treat --edge as an internal edge id")
    p.add_argument("--window", nargs=2, type=float, metavar=("XMIN", "XMAX"))
    p.add_argument("--out")
    p.add_argument("--plan-append")
    p.set_defaults(fn=cmd_op)

    p = sub.add_parser("replay", help="rebuild a region from a plan")
    p.add_argument("plan")
    p.add_argument("--out")
    p.add_argument("--no-check", action="store_true")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("gen-tree", help="build the tree of a parameter file")
    p.add_argument("params")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen_tree)

    p = sub.add_parser("recognize", help="decide family membership")
    p.add_argument("tree")
    p.add_argument("--out", help="write the certificate parameters here")
    p.set_defaults(fn=cmd_recognize)

    p = sub.add_parser("realize", help="build circles for a tree")
    p.add_argument("tree")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("fuzz", help="random operation sequences")
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("emit-algebraic", help="print the polynomial system")
    p.add_argument("region")
    p.add_argument("--spec", help="labeling and degree file")
    p.add_argument("--polys", action="store_true", help="only the circle polynomials")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_emit_algebraic)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.fn(a)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotInFamily as exc:
        print(f"NotInFamily: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_FAMILY
    except GeometricSearchFailed as exc:
        where = f" at {exc.step}" if exc.step else ""
        print(f"GeometricSearchFailed{where}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (OperationError, InvalidRegion, InvalidParams, InvalidSpec, ReplayDivergence,
            VerificationFailed, KeyError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CircleReebError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

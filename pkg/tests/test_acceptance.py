"""Acceptance checks; each test prints one PASS/FAIL line with its measurements."""

import logging
import random
import re
import time

import networkx as nx
import pytest

from circlereeb.algebraic import AlgebraicModelSpec, emit_model
from circlereeb.fuzz import FUZZ_KINDS, random_case, run_fuzz
from circlereeb.geom import Axis
from circlereeb.grammar import enumerate_family, generate, recognize
from circlereeb.io import format_region
from circlereeb.ops import OpKind, apply_record, replay
from circlereeb.planner import realize, skeleton_circle_count, verify
from circlereeb.reeb import (
    VertexKind,
    check_corollary1,
    check_corollary2,
    compute_pr_graph,
    is_tree,
)
from circlereeb.region import SSRegion
from circlereeb.trees import Tree, canonical_code
from oracles import graph_of_sweep, min_feature_cells, raster_graph, same_graph

log = logging.getLogger("acceptance")


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def increasing(vals, eps=2e-9):
    return all(b - a > eps for a, b in zip(vals, vals[1:]))


def test_criterion_1_unit_disk(report):
    shapes_ok = True
    worst = 0.0
    for axis in Axis:
        times = []
        for _ in range(200):
            r = SSRegion.unit_disk()  # fresh object, nothing cached
            t = time.perf_counter()
            g = compute_pr_graph(r, axis)
            times.append(time.perf_counter() - t)
        shapes_ok &= (len(g.vertices) == 2 and len(g.edges) == 1
                      and all(v.kind is VertexKind.LEAF for v in g.vertices))
        worst = max(worst, sorted(times)[len(times) // 2])
    ok = shapes_ok and worst < 1e-3
    assert report(1, ok, f"single edge with two leaves on both axes={shapes_ok}, median time {worst * 1e3:.3f} ms (< 1 ms)")


def _run_ops(seed, count, steps, kinds):
    """Fuzz with an independent per-step check; returns (successes, bad, skipped) by kind."""
    good, bad, skipped = {}, {}, {}

    def on_step(before, after, rec, rep):
        g0, g1 = compute_pr_graph(before), compute_pr_graph(after)
        if rec.kind is OpKind.MBCC:
            ok = check_corollary1(g0, g1, rec.edge) and len(rep.new_singular_values) == 3
        else:
            ok = check_corollary2(g0, g1, rec.edge) and len(rep.new_singular_values) == 2
        ok = ok and increasing(rep.new_singular_values)
        (good if ok else bad)[rec.kind] = (good if ok else bad).get(rec.kind, 0) + 1

    failures = 0
    for i in range(count):
        case = random_case(seed, i, steps, kinds, on_step=on_step)
        failures += case.failure is not None
        for ev in case.events:
            if not ev.applied:
                skipped[ev.kind] = skipped.get(ev.kind, 0) + 1
    return good, bad, skipped, failures


def test_criterion_2_mbcc_pattern(report):
    t = time.perf_counter()
    good, bad, skipped, failures = _run_ops(202, 200, 6, FUZZ_KINDS)
    el = time.perf_counter() - t
    n = good.get(OpKind.MBCC, 0)
    ok = n >= 200 and not bad.get(OpKind.MBCC) and failures == 0 and el < 60
    assert report(2, ok, f"{n} mbcc ops verified, {bad.get(OpKind.MBCC, 0)} wrong, "
                         f"{skipped.get(OpKind.MBCC, 0)} searches reported as failed, {el:.1f} s (< 60 s)")


def test_criterion_3_sscc_pattern(report):
    t = time.perf_counter()
    good, bad, skipped, failures = _run_ops(303, 200, 6, FUZZ_KINDS)
    el = time.perf_counter() - t
    cases = (OpKind.SSCC_A1, OpKind.SSCC_A2, OpKind.SSCC_B)
    counts = {k.value: good.get(k, 0) for k in cases}
    wrong = sum(bad.get(k, 0) for k in cases)
    ok = all(v >= 100 for v in counts.values()) and wrong == 0 and failures == 0 and el < 60
    sk = {k.value: skipped.get(k, 0) for k in cases}
    assert report(3, ok, f"verified {counts}, wrong {wrong}, reported failures {sk}, {el:.1f} s (< 60 s)")


def test_criterion_4_raster_oracle(report):
    n_regions, res = 500, 2048
    t = time.perf_counter()
    compared = mismatched = excluded = 0
    for i in range(n_regions):
        depth = random.Random(f"depth/{i}").randint(0, 3)
        r = random_case(404, i, depth).region
        feat = min_feature_cells(r, res)
        if feat <= 4:
            excluded += 1
            log.info("region %d (depth %d) excluded: smallest feature %.2f cells", i, depth, feat)
            continue
        compared += 1
        if not same_graph(raster_graph(r, res), graph_of_sweep(r)):
            mismatched += 1
            log.error("region %d disagrees with the raster oracle", i)
    el = time.perf_counter() - t
    rate = excluded / n_regions
    ok = mismatched == 0 and rate < 0.05 and el < 600
    assert report(4, ok, f"{compared} of {n_regions} regions compared at {res}^2, {mismatched} mismatches, "
                         f"exclusion rate {rate:.1%} (< 5%), {el:.0f} s (< 600 s)")


def test_criterion_5_realize_family(report):
    t = time.perf_counter()
    fam = enumerate_family(12)
    done = 0
    count_ok = True
    for code, p in fam:
        res = realize(generate(p))
        count_ok &= res.skeleton_circles == skeleton_circle_count(p) == 1 + p.n0 + sum(p.attach.values())
        if verify(res) and res.code == code:
            done += 1
    el = time.perf_counter() - t
    ok = done == len(fam) and count_ok and el < 900
    assert report(5, ok, f"{done}/{len(fam)} trees realized and verified, skeleton circle counts exact={count_ok}, "
                         f"{el:.1f} s (< 900 s)")


def test_criterion_6_grammar_round_trip(report):
    t = time.perf_counter()
    fam = enumerate_family(16)
    round_trip = sum(1 for code, p in fam
                     if recognize(generate(p)).accepted
                     and canonical_code(generate(recognize(generate(p)).params)) == code)
    member = {c for c, _ in enumerate_family(12)}
    wrong, total = 0, 0
    for n in range(1, 13):
        for g in (nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]):
            tr = Tree(n, tuple(g.edges()))
            total += 1
            if recognize(tr).accepted != (canonical_code(tr) in member):
                wrong += 1
    claw = not recognize(Tree.star(3)).accepted
    el = time.perf_counter() - t
    ok = round_trip == len(fam) and wrong == 0 and claw and el < 300
    assert report(6, ok, f"{round_trip}/{len(fam)} round trips, claw rejected={claw}, "
                         f"{wrong} wrong decisions over {total} trees with <= 12 vertices, {el:.1f} s (< 300 s)")


def test_criterion_7_tree_invariant(report):
    checked = violations = 0

    def on_step(before, after, rec, rep):
        nonlocal checked, violations
        for axis in Axis:
            g = compute_pr_graph(after, axis)
            checked += 1
            violations += len(g.vertices) - len(g.edges) != 1 or not is_tree(g)

    for i in range(150):
        random_case(707, i, 6, on_step=on_step)
    for code, p in enumerate_family(12):
        res = realize(generate(p))
        r = res.plan.base
        for rec in res.plan.steps:
            r = apply_record(r, rec)
            g = compute_pr_graph(r)
            checked += 1
            violations += len(g.vertices) - len(g.edges) != 1
    assert report(7, violations == 0, f"{checked} graphs checked after individual steps, {violations} violations")


def test_criterion_8_determinism(report):
    plans = [(c.plan, c.region) for c in (random_case(808, i, 6) for i in range(60))]
    plans += [(res.plan, res.region) for res in (realize(generate(p)) for _, p in enumerate_family(12))]
    same = sum(format_region(replay(pl)) == format_region(r) for pl, r in plans)
    s1, s2 = run_fuzz(6, 42, 30).text(), run_fuzz(6, 42, 30).text()
    ok = same == len(plans) and s1 == s2
    assert report(8, ok, f"{same}/{len(plans)} plans replay to identical region files, "
                         f"equal-seed fuzz summaries identical={s1 == s2}")


def test_criterion_9_algebraic(report):
    regions = [random_case(909, i, i % 7).region for i in range(50)]
    t = time.perf_counter()
    good = 0
    for i, r in enumerate(regions):
        rng = random.Random(i)
        n = len(r.constraints)
        labels = list(range(1, n + 1))
        rng.shuffle(labels)
        spec = AlgebraicModelSpec(dict(zip(range(1, n + 1), labels)),
                                  {k: rng.randint(1, 4) for k in range(1, n + 1)})
        text = emit_model(r, spec)
        declared = int(text.splitlines()[0].split()[1])
        used = set(re.findall(r"\b(x\d|y\d+_\d+)\b", text))
        good += declared == len(used) == spec.classes + 2 + sum(spec.degrees.values())
    disk = emit_model(SSRegion.unit_disk())
    sphere = disk == "ambient_dim 4\n1 - x1^2 - x2^2 - y1_1^2 - y1_2^2 = 0\n"
    el = time.perf_counter() - t
    ok = good == 50 and sphere and el < 1
    assert report(9, ok, f"{good}/50 systems with the expected ambient dimension, unit disk gives the "
                         f"4-variable sphere equation={sphere}, {el * 1e3:.0f} ms (< 1 s)")

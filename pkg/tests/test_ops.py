import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circlereeb.errors import (
    CaseInapplicable,
    ReplayDivergence,
    WindowUnsatisfiable,
)
from circlereeb.fuzz import random_case
from circlereeb.geom import Axis
from circlereeb.io import format_region
from circlereeb.ops import (
    OpKind,
    OpRecord,
    Plan,
    SsccCase,
    apply_record,
    circle_of,
    default_sscc_case,
    mbcc,
    mbssc_pair,
    replay,
    sscc,
)
from circlereeb.reeb import (
    check_corollary1,
    check_corollary2,
    check_pair_pattern,
    compute_pr_graph,
    edge_address,
    is_tree,
)
from circlereeb.region import validate


def strictly_increasing(vals, eps=2e-9):
    return all(b - a > eps for a, b in zip(vals, vals[1:]))


def test_mbcc_on_disk(disk):
    r, rec, rep = mbcc(disk, 0)
    assert validate(r).ok
    assert len(r.constraints) == 2
    assert len(rep.new_singular_values) == 3 and strictly_increasing(rep.new_singular_values)
    assert check_corollary1(compute_pr_graph(disk), compute_pr_graph(r), 0)
    assert rec.kind is OpKind.MBCC and rec.host == 0


def test_mbcc_window_holds_all_values(disk):
    r, rec, rep = mbcc(disk, 0, window=(-0.1, 0.1))
    assert all(-0.1 < v < 0.1 for v in rep.new_singular_values)


def test_mbcc_upper_half(disk):
    r, rec, rep = mbcc(disk, 0, upper_half=True)
    c = rep.added_circle
    assert c.center.y - c.radius > 0


def test_narrow_window_rejected(disk):
    with pytest.raises(WindowUnsatisfiable):
        mbcc(disk, 0, window=(0.1, 0.1 + 1e-12))


def test_window_off_the_edge(disk):
    with pytest.raises(WindowUnsatisfiable):
        mbcc(disk, 0, window=(2.0, 3.0))


def test_sscc_b_on_disk_inapplicable(disk):
    with pytest.raises(CaseInapplicable):
        sscc(disk, 0, SsccCase.B)


@pytest.mark.parametrize("case", [SsccCase.A1, SsccCase.A2])
def test_sscc_on_disk(disk, case):
    r, rec, rep = sscc(disk, 0, case)
    assert validate(r).ok
    assert len(rep.new_singular_values) == 2 and strictly_increasing(rep.new_singular_values)
    assert check_corollary2(compute_pr_graph(disk), compute_pr_graph(r), 0)
    assert rec.kind is case.kind
    inside = r.constraints[-1].inside
    assert inside == (case is SsccCase.A2)


def test_sscc_b_inside_the_bite(bite):
    g = compute_pr_graph(bite)
    concave = [e.id for e in g.edges
               if any(o is not None and not bite.constraints[o[0]].inside for o in (e.top_owner, e.bottom_owner))]
    assert concave
    eid = concave[0]
    assert default_sscc_case(bite, eid) in (SsccCase.A1, SsccCase.B)
    r, rec, rep = sscc(bite, eid, SsccCase.B)
    assert check_corollary2(g, compute_pr_graph(r), eid)
    assert not r.constraints[-1].inside


def test_sscc_a1_generic_point(disk):
    # chord of the disk away from the extreme points: two distinct values
    r, rec, rep = sscc(disk, 0, SsccCase.A1, window=(0.3, 0.6))
    a, b = rep.new_singular_values
    assert 0.3 < a < b < 0.6


def test_pair(disk):
    r, (s, m), rep = mbssc_pair(disk, 0)
    assert s.kind is OpKind.SSCC_A2 and m.kind is OpKind.MBCC
    assert len(rep.new_singular_values) == 5 and strictly_increasing(rep.new_singular_values)
    assert check_pair_pattern(compute_pr_graph(disk), compute_pr_graph(r), 0)
    v = rep.new_singular_values
    eps = 0.5 * (v[4] - v[0]) / 2
    assert v[0] + eps < v[1] and v[3] < v[4] - eps


def test_pair_fraction_checked(disk):
    with pytest.raises(ValueError):
        mbssc_pair(disk, 0, epsilon_frac=1.5)


def test_pair_failure_is_reported(disk):
    # a 1e-8 window leaves no room for the nested circle: the search gives up loudly
    from circlereeb.errors import OperationError

    with pytest.raises(OperationError):
        mbssc_pair(disk, 0, window=(0.5, 0.5 + 1e-8))


def test_replay_is_exact(disk):
    r1, rec1, _ = mbcc(disk, 0)
    r2, rec2, _ = sscc(r1, "0/1", SsccCase.A1)
    again = replay(Plan(disk, [rec1, rec2]))
    assert format_region(again) == format_region(r2)


def test_replay_detects_wrong_edge(disk):
    r1, rec, _ = mbcc(disk, 0)
    bad = OpRecord(rec.kind, rec.host, "0/0/0", rec.params)
    with pytest.raises(ReplayDivergence):
        apply_record(disk, bad)


def test_replay_detects_bad_host(disk):
    rec = OpRecord(OpKind.MBCC, 3, "0", (("theta", 1.0), ("radius", 0.1)))
    with pytest.raises(ReplayDivergence):
        circle_of(disk, rec)


def test_mbcc_circle_centered_on_host(disk):
    r, rec, rep = mbcc(disk, 0)
    c = rep.added_circle
    assert math.hypot(c.center.x, c.center.y) == pytest.approx(1.0)
    assert c.radius == rec.param("radius")


@given(st.integers(0, 300), st.integers(0, 4), st.sampled_from(list(OpKind)[:4]))
def test_every_success_keeps_the_pattern(index, depth, kind):
    r = random_case(9, index, depth).region
    g = compute_pr_graph(r)
    for e in g.edges:
        try:
            if kind is OpKind.MBCC:
                r2, rec, rep = mbcc(r, e.id)
                ok = check_corollary1(g, compute_pr_graph(r2), e.id)
                n = 3
            else:
                from circlereeb.ops import _CASE_OF_KIND
                r2, rec, rep = sscc(r, e.id, _CASE_OF_KIND[kind])
                ok = check_corollary2(g, compute_pr_graph(r2), e.id)
                n = 2
        except Exception as exc:  # failed searches are allowed, wrong results are not
            from circlereeb.errors import OperationError
            assert isinstance(exc, OperationError)
            continue
        assert ok and validate(r2).ok and is_tree(compute_pr_graph(r2))
        assert is_tree(compute_pr_graph(r2, Axis.VERTICAL))
        assert len(rep.new_singular_values) == n and strictly_increasing(rep.new_singular_values)
        assert rec.edge == edge_address(g, e.id)
        break

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlereeb.errors import InvalidRegion, NotATree, PointOutsideRegion
from circlereeb.fuzz import random_case
from circlereeb.geom import Axis, Point
from circlereeb.reeb import (
    VertexKind,
    check_corollary1,
    check_corollary2,
    compute_pr_graph,
    edge_address,
    is_tree,
    locate,
    resolve_edge,
)
from circlereeb.region import Side, SSRegion
from circlereeb.trees import canonical_code
from oracles import graph_of_sweep, min_feature_cells, raster_graph, same_graph

IN, OUT = Side.KEEP_INSIDE, Side.KEEP_OUTSIDE


def kinds(g):
    return sorted(v.kind.value for v in g.vertices)


def test_disk_graphs(disk):
    for axis in Axis:
        g = compute_pr_graph(disk, axis)
        assert len(g.vertices) == 2 and len(g.edges) == 1
        assert kinds(g) == ["leaf", "leaf"]
        assert is_tree(g)


def test_bite_graph_has_pendant(bite):
    g = compute_pr_graph(bite, Axis.HORIZONTAL)
    assert len(g.vertices) == 5
    assert kinds(g) == ["junction", "leaf", "leaf", "leaf", "pass"]
    xs = sorted(v.x for v in g.vertices)
    assert xs[1:4] == pytest.approx([0.50711, 0.55225, 0.83368], abs=1e-4)
    assert check_corollary1(compute_pr_graph(SSRegion.unit_disk()), g, 0)


def test_top_bite_vertical_graph():
    # symmetric bite at the north pole: two horn tips at the same height
    r = SSRegion.build([(0, 0, 1, IN), (0, 1, 0.5, OUT)])
    g = compute_pr_graph(r, Axis.VERTICAL)
    assert is_tree(g)
    leaves = sorted(v.x for v in g.vertices if v.kind is VertexKind.LEAF)
    assert leaves == pytest.approx([-1, 0.875, 0.875])
    h = compute_pr_graph(r, Axis.HORIZONTAL)
    assert is_tree(h)


def test_annulus_is_not_a_tree():
    r = SSRegion.build([(0, 0, 1, IN), (0, 0, 0.4, OUT)], seed=(0.7, 0))
    g = compute_pr_graph(r, Axis.HORIZONTAL)
    assert g.is_connected()
    assert not is_tree(g)
    assert len(g.edges) - len(g.vertices) == 0
    with pytest.raises(NotATree):
        g.as_tree()


def test_invalid_region_refused():
    r = SSRegion.build([(0, 0, 1, IN), (0, 1.5, 0.5, OUT)], seed=(0, 0))
    with pytest.raises(InvalidRegion):
        compute_pr_graph(r)


def test_locate(bite):
    g = compute_pr_graph(bite)
    loc = locate(bite, g, Point(0, 0))
    assert loc.interior
    left = [v for v in g.vertices if v.x == -1][0]
    assert locate(bite, g, Point(-1, 0)).vertex == left.id
    with pytest.raises(PointOutsideRegion):
        locate(bite, g, Point(0.7071, 0.7071))


def test_edge_addresses_round_trip(bite):
    g = compute_pr_graph(bite)
    addrs = [edge_address(g, e.id) for e in g.edges]
    assert len(set(addrs)) == len(addrs)
    for e in g.edges:
        assert resolve_edge(g, edge_address(g, e.id)) == e.id
    with pytest.raises(KeyError):
        resolve_edge(g, "9/9")


def test_pattern_checks_reject_wrong_pattern(disk, bite):
    g0 = compute_pr_graph(disk)
    g1 = compute_pr_graph(bite)
    assert not check_corollary2(g0, g1, 0)
    assert not check_corollary1(g0, g0, 0)


def _nx(g):
    m = nx.MultiGraph()
    m.add_nodes_from(v.id for v in g.vertices)
    m.add_edges_from(e.endpoints for e in g.edges)
    return m


@given(st.integers(0, 200), st.integers(0, 5))
def test_graph_is_tree_and_degrees_match(index, depth):
    r = random_case(3, index, depth).region
    for axis in Axis:
        g = compute_pr_graph(r, axis)
        m = _nx(g)
        assert nx.is_tree(m) == is_tree(g)
        assert is_tree(g)
        for v in g.vertices:
            assert v.degree == m.degree(v.id)
            assert v.kind is VertexKind.from_degree(v.degree)


@given(st.integers(0, 200), st.integers(1, 4), st.randoms(use_true_random=False))
def test_constraint_order_does_not_matter(index, depth, rnd):
    r = random_case(4, index, depth).region
    order = list(range(len(r.constraints)))
    rnd.shuffle(order)
    p = r.permuted(order)
    for axis in Axis:
        assert canonical_code(compute_pr_graph(r, axis)) == canonical_code(compute_pr_graph(p, axis))


@settings(max_examples=15)
@given(st.integers(0, 500))
def test_sweep_agrees_with_raster(index):
    r = random_case(6, index, index % 3).region
    if min_feature_cells(r, 1024) <= 4:
        return
    assert same_graph(raster_graph(r, 1024), graph_of_sweep(r))


def test_unit_disk_timing(disk):
    import time

    fresh = [SSRegion.unit_disk() for _ in range(50)]
    t = time.perf_counter()
    for r in fresh:
        compute_pr_graph(r, Axis.HORIZONTAL)
    assert (time.perf_counter() - t) / 50 < 1e-3

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from circlereeb.errors import BudgetExceeded, InvalidParams, ParseError
from circlereeb.grammar import (
    GrammarParams,
    build,
    enumerate_family,
    format_params,
    generate,
    parse_params,
    recognize,
    validate_params,
)
from circlereeb.trees import Tree, canonical_code

FAMILY_16 = enumerate_family(16)


def nine():
    return GrammarParams(1, {"r/1": 0}, {"r:0": 2, "r:1": 3, "r/1:0": 0})


def test_single_edge():
    t = generate(GrammarParams(0, {}, {"r:0": 0}))
    assert t.n == 2
    c = recognize(t)
    assert c.accepted and c.params.n0 == 0


def test_nine_vertex_tree():
    t = generate(nine())
    assert t.n == 9
    assert sorted(t.degrees()) == [1, 1, 1, 2, 2, 2, 2, 2, 3]


def test_claw_rejected():
    res = recognize(Tree.star(3))
    assert not res.accepted and res.reason


def test_degree_four_rejected():
    assert "degree 4" in recognize(Tree.star(4)).reason


def test_odd_path_rejected():
    assert not recognize(Tree.path(5)).accepted
    assert recognize(Tree.path(6)).accepted


@pytest.mark.parametrize("p,kind", [
    (GrammarParams(-1, {}, {}), "range"),
    (GrammarParams(1, {}, {"r:0": 2, "r:1": 3}), "attach"),
    (GrammarParams(0, {"r/1": 0}, {"r:0": 0}), "attach"),
    (GrammarParams(0, {}, {}), "final"),
    (GrammarParams(0, {}, {"r:0": 0, "r:7": 1}), "final"),
    (GrammarParams(0, {}, {"r:0": 1}), "parity"),
    (GrammarParams(1, {"r/1": 0}, {"r:0": 2, "r:1": 2, "r/1:0": 0}), "parity"),
    (GrammarParams(1, {"r/1": 0}, {"r:0": 1, "r:1": 2, "r/1:0": 0}), "parity"),
    (GrammarParams(2, {"r/1": 0, "r/2": 0}, {"r:0": 2, "r:1": 2, "r:2": 2, "r/1:0": 0, "r/2:0": 0}), "parity"),
])
def test_invalid_params(p, kind):
    rep = validate_params(p)
    assert kind in rep.kinds()
    with pytest.raises(InvalidParams):
        generate(p)


def test_params_text_round_trip():
    p = nine()
    assert parse_params(format_params(p)) == p


@pytest.mark.parametrize("text", ["", "params v2\n", "params v1\nn0 x\n", "params v1\nattach r/1\n", "params v1\nwhat 1 2\n"])
def test_params_parse_errors(text):
    with pytest.raises(ParseError):
        parse_params(text)


def test_enumeration_sizes():
    assert len(enumerate_family(9)) == 5
    assert len(enumerate_family(12)) == 10
    with pytest.raises(BudgetExceeded):
        enumerate_family(17)


def test_enumeration_codes_unique_and_bounded():
    codes = [c for c, _ in FAMILY_16]
    assert len(codes) == len(set(codes))
    for code, p in FAMILY_16:
        t = generate(p)
        assert t.n <= 16 and canonical_code(t) == code


@pytest.mark.parametrize("code,p", FAMILY_16, ids=[str(i) for i in range(len(FAMILY_16))])
def test_certificate_regenerates_tree(code, p):
    t = generate(p)
    cert = recognize(t)
    assert cert.accepted
    assert validate_params(cert.params).ok
    assert canonical_code(generate(cert.params)) == code
    # the embedding maps every address onto a distinct vertex of t
    assert sorted(cert.embedding.values()) == list(range(t.n))
    back, ids = build(cert.params)
    for a, b in back.edges:
        inv = {v: k for k, v in ids.items()}
        assert cert.embedding[inv[b]] in t.adj[cert.embedding[inv[a]]]


@given(st.integers(0, len(FAMILY_16) - 1), st.randoms(use_true_random=False))
def test_recognition_ignores_labels(i, rnd):
    t = generate(FAMILY_16[i][1])
    perm = list(range(t.n))
    rnd.shuffle(perm)
    assert recognize(t.relabel(perm)).accepted


def test_recognizer_matches_enumeration_up_to_12():
    family = {c for c, _ in enumerate_family(12)}
    for n in range(1, 13):
        for g in nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]:
            t = Tree(n, tuple(g.edges()))
            assert recognize(t).accepted == (canonical_code(t) in family), canonical_code(t)

import pytest
from hypothesis import given, settings, strategies as st

from rigmatch.fuzz import make_instance
from rigmatch.graph import BACKWARD, DataGraph
from rigmatch.query import parse_pattern
from rigmatch.reach import ReachIndex
from rigmatch.rig import MATCH, REFINED, EdgeRows, build_rig, dumps_rig, rig_stats

from conftest import FIG2_IDS, names
from oracles import Closure


def _named_pairs(g, rig, ei):
    inv = {v: k for k, v in FIG2_IDS.items()}
    return {(inv[g.to_external(a)], inv[g.to_external(b)]) for a, b in rig.edge_pairs(ei)}


ANSWER_RIG = {
    (0, 1): {("a1", "b0"), ("a2", "b2")},
    (0, 2): {("a1", "c0"), ("a1", "c1"), ("a2", "c0"), ("a2", "c2")},
    (1, 2): {("b0", "c0"), ("b0", "c1"), ("b2", "c0"), ("b2", "c2")},
}


def test_fig2_refined_rig(backend, fig2):
    g, q, ix = fig2
    rig = build_rig(q, g, ix)
    assert [names(g, c) for c in rig.cos] == [{"a1", "a2"}, {"b0", "b2"}, {"c0", "c1", "c2"}]
    got = {(e.tail, e.head): _named_pairs(g, rig, ei) for ei, e in enumerate(q.edges)}
    extra = {k: got[k] - ANSWER_RIG[k] for k in got}
    assert all(ANSWER_RIG[k] <= got[k] for k in got)
    assert extra == {(0, 1): set(), (0, 2): set(), (1, 2): {("b2", "c1")}}
    assert (rig.num_nodes, rig.num_edges) == (7, 11)
    # backward rows are the transpose of forward rows
    for ei in range(len(q.edges)):
        fwd = {tuple(p) for p in rig.rows(ei).pairs().tolist()}
        bwd = {tuple(p[::-1]) for p in rig.rows(ei, BACKWARD).pairs().tolist()}
        assert fwd == bwd


def test_match_mode_keeps_label_matches(fig2):
    g, q, ix = fig2
    rig = build_rig(q, g, ix, mode=MATCH)
    assert [len(c) for c in rig.cos] == [3, 4, 3]
    assert rig.sim is None


def test_empty_rig():
    g = DataGraph.from_edges(["a", "b"], [(1, 0)])
    rig = build_rig(parse_pattern("A:a -> B:b"), g, ReachIndex(g))
    assert rig.is_empty and rig.num_edges == 0 and rig.row(0, 0) == set()
    with pytest.raises(ValueError):
        rig.rows(0)
    assert rig_stats(rig, g)["ratio"] == 0.0
    with pytest.raises(ValueError):
        build_rig(parse_pattern("A:a -> B:b"), g, ReachIndex(g), mode="bogus")


def test_stats_and_dump(fig2):
    g, q, ix = fig2
    rig = build_rig(q, g, ix)
    st_ = rig_stats(rig, g)
    assert st_["nodes"] == 7 and st_["edges"] == 11 and st_["cos_sizes"] == [2, 2, 3]
    assert st_["ratio"] == pytest.approx(18 / 24)
    text = dumps_rig(rig, g)
    assert text.splitlines()[:3] == ["c 0 1 2", "c 1 3 5", "c 2 7 8 9"]
    assert "t 7 11" in text and "e 5 8" in text


def test_edge_rows_lookup():
    import numpy as np
    rows = EdgeRows.from_pairs(np.array([2, 5], dtype=np.uint32), np.array([[5, 9], [2, 1], [5, 3]]))
    assert rows.row(5) == {3, 9} and rows.row(2) == {1} and rows.row(4) == set()
    assert len(rows) == 3 and rows.nonempty().tolist() == [2, 5]


@settings(max_examples=40)
@given(seed=st.integers(0, 10 ** 6))
def test_sandwich(backend, seed):
    inst = make_instance(seed, 1, max_nodes=30)
    g, q = inst.graph, inst.query
    ix, cl = ReachIndex(g), Closure(g)
    edges = set(map(tuple, g.edges().tolist()))
    from rigmatch.mjoin import brute_force_oracle
    truth = brute_force_oracle(q, g, cl)
    ms = [set(g.inverted_list(x.label)) for x in q.nodes]
    for mode in (REFINED, MATCH):
        rig = build_rig(q, g, ix, mode=mode)
        for v in range(q.num_nodes):
            assert {t[v] for t in truth} <= set(rig.cos[v]) <= ms[v]
        for ei, e in enumerate(q.edges):
            os_e = {(t[e.tail], t[e.head]) for t in truth}
            ms_e = {(a, b) for a in ms[e.tail] for b in ms[e.head]
                    if ((a, b) in edges if e.is_direct else cl.reaches(a, b))}
            assert os_e <= rig.edge_pairs(ei) <= ms_e

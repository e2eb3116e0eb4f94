import io

import numpy as np
import pytest
from hypothesis import given

from rigmatch.errors import FormatError, GraphRangeError, ParseError
from rigmatch.graph import BACKWARD, DataGraph, dumps_graph, load_graph, loads_graph

from conftest import FIG2_GRAPH
from oracles import closure, graphs


def test_load_fig2():
    g = load_graph(FIG2_GRAPH)
    assert (g.num_nodes, g.num_edges) == (10, 14)
    assert g.label_names == ["a", "b", "c"]
    assert g.external_set(g.inverted_list("b")) == {3, 4, 5, 6}
    assert g.inverted_list("zzz") == set()
    assert g.is_dag
    a0 = g.to_internal(0)
    assert g.external_set(g.adjacency(a0)) == {6, 8}
    assert g.external_set(g.adjacency(g.to_internal(3), BACKWARD)) == {1, 5}


@pytest.mark.parametrize("text, exc", [
    ("", ParseError),
    ("v 0 a\n", ParseError),
    ("t 2 1\nv 0 a\nv 1 b\ne 0 x\n", ParseError),
    ("t 2 1\nv 0 a\nv 1 b\ne 0 5\n", GraphRangeError),
    ("t 2 0\nv 0 a\nv 0 b\n", FormatError),
    ("t 2 0\nv 0 a\n", FormatError),
    ("t 2 2\nv 0 a\nv 1 b\ne 0 1\n", FormatError),
    ("t 1 0\nv 0 a\nq 1\n", ParseError),
])
def test_bad_input(text, exc):
    with pytest.raises(exc):
        loads_graph(text)


def test_parse_error_has_line_number():
    with pytest.raises(ParseError) as info:
        loads_graph("t 1 0\n# note\nv 0 a\nbogus\n")
    assert info.value.lineno == 4


def test_range_checks():
    g = DataGraph.from_edges(["a", "b"], [(0, 1)])
    with pytest.raises(GraphRangeError):
        g.label(2)
    with pytest.raises(GraphRangeError):
        g.to_internal(-1)
    with pytest.raises(GraphRangeError):
        DataGraph.from_edges(["a"], [(0, 1)])
    with pytest.raises(IndexError):
        g.adjacency(7)


def test_duplicates_dropped_self_loops_kept():
    g = DataGraph.from_edges(["a", "a"], [(0, 1), (0, 1), (1, 1)])
    assert g.num_edges == 2
    assert not g.is_dag


def test_empty_graph():
    g = loads_graph("t 0 0\n")
    assert g.num_nodes == 0 and g.num_edges == 0


@given(graphs(max_nodes=30))
def test_roundtrip_and_renumbering(gr):
    labels, edges = gr
    g = DataGraph.from_edges(labels, edges)
    again = loads_graph(dumps_graph(g))
    assert sorted(map(tuple, again.ext_ids[again.edges()].tolist())) == \
        sorted(map(tuple, g.ext_ids[g.edges()].tolist()))
    for v in range(g.num_nodes):
        assert g.label(v) == labels[g.to_external(v)]
        assert g.to_internal(g.to_external(v)) == v
    # every node reached from u has an internal id in [.., dfs_end[u]]
    desc = closure(len(labels), edges)
    for x in range(len(labels)):
        u = g.to_internal(x)
        for y in desc[x]:
            assert g.to_internal(y) <= g.dfs_end[u]
    plain = DataGraph.from_edges(labels, edges, renumber=False)
    assert plain.dfs_end is None
    assert plain.ext_ids.tolist() == list(range(len(labels)))


def test_subgraph_keeps_induced_edges():
    g = load_graph(FIG2_GRAPH)
    keep = [g.to_internal(x) for x in (1, 3, 7, 8)]
    s = g.subgraph(keep)
    assert s.num_nodes == 4
    # dense renumbering in ascending original id order: 1,3,7,8 -> 0,1,2,3
    got = sorted(map(tuple, s.ext_ids[s.edges()].tolist()))
    assert got == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
    assert [s.label(s.to_internal(i)) for i in range(4)] == ["a", "b", "c", "c"]

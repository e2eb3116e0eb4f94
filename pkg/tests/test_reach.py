import threading

import pytest
from hypothesis import given, settings

from rigmatch import kernels
from rigmatch.errors import GraphRangeError
from rigmatch.graph import DataGraph
from rigmatch.reach import ReachIndex

from oracles import closure, graphs


@settings(max_examples=150)
@given(graphs(max_nodes=40, max_edges=100))
def test_reaches_equals_bfs_closure(backend, gr):
    labels, edges = gr
    g = DataGraph.from_edges(labels, edges)
    ix = ReachIndex(g)
    desc = closure(len(labels), edges)
    for x in range(len(labels)):
        u = g.to_internal(x)
        want = {g.to_internal(y) for y in desc[x]}
        assert ix.descendants(u) == want
        for v in range(g.num_nodes):
            assert ix.reaches(u, v) == (v in want)


def test_cycle_rule():
    g = DataGraph.from_edges(["a"] * 4, [(0, 1), (1, 0), (2, 2), (1, 3)])
    ix = ReachIndex(g)
    i = g.to_internal
    assert ix.reaches(i(0), i(0)) and ix.reaches(i(1), i(1))
    assert ix.reaches(i(2), i(2))      # self-loop
    assert not ix.reaches(i(3), i(3))  # no cycle through 3
    assert ix.component(i(0)) == {i(0), i(1)}


def test_small_bloom_and_cache_eviction():
    g = DataGraph.from_edges(["a"] * 6, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 5)])
    ix = ReachIndex(g, bloom_bits=64, cache_size=2)
    i = g.to_internal
    for _ in range(2):
        assert ix.reaches(i(0), i(5))
        assert not ix.reaches(i(5), i(0))
        assert not ix.reaches(i(3), i(2))
    with pytest.raises(ValueError):
        ReachIndex(g, bloom_bits=10)


def test_range_error():
    ix = ReachIndex(DataGraph.from_edges(["a"], []))
    with pytest.raises(GraphRangeError):
        ix.reaches(0, 1)


def test_successors_discovered_before_finish():
    g = DataGraph.from_edges(["a"] * 5, [(0, 1), (1, 2), (0, 3), (4, 3)])
    ix = ReachIndex(g)
    for s, d in g.edges().tolist():
        a, b = ix.interval(s), ix.interval(d)
        assert b.begin <= a.end


def test_concurrent_queries_agree():
    labels = ["a"] * 60
    edges = [(i, (i * 7 + 3) % 60) for i in range(60)] + [(i, i + 1) for i in range(0, 59, 3)]
    g = DataGraph.from_edges(labels, edges)
    ix = ReachIndex(g)
    desc = closure(60, edges)
    bad = []

    def work(offset):
        for x in range(offset, 60, 4):
            for y in range(60):
                if ix.reaches(g.to_internal(x), g.to_internal(y)) != (y in desc[x]):
                    bad.append((x, y))

    threads = [threading.Thread(target=work, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not bad


@settings(max_examples=100)
@given(graphs(max_nodes=40, max_edges=100))
def test_interval_negatives_are_sound(gr):
    labels, edges = gr
    g = DataGraph.from_edges(labels, edges)
    ix = ReachIndex(g)
    desc = closure(len(labels), edges)
    for x in range(len(labels)):
        a = ix.interval(g.to_internal(x))
        for y in range(len(labels)):
            if a.end < ix.interval(g.to_internal(y)).begin:
                assert y not in desc[x]


@settings(max_examples=100)
@given(graphs(max_nodes=30, max_edges=80))
def test_transitive_and_scc_closed(gr):
    labels, edges = gr
    g = DataGraph.from_edges(labels, edges)
    ix = ReachIndex(g)
    n = g.num_nodes
    r = [[ix.reaches(u, v) for v in range(n)] for u in range(n)]
    for u in range(n):
        for v in range(n):
            if r[u][v]:
                assert all(r[u][w] for w in range(n) if r[v][w])
        comp = ix.component(u)
        if len(comp) > 1:
            assert all(r[u][v] and r[v][u] for v in comp)

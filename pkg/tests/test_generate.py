import numpy as np
from hypothesis import given, strategies as st

from rigmatch.generate import (KIND_MIX, TEMPLATES, community_graph, label_names, random_graph,
                               random_query, template_query)
from rigmatch.query import topological_order


def test_label_names():
    assert label_names(3) == ["a", "b", "c"]
    assert label_names(30)[-1] == "l29"


@given(st.integers(0, 10 ** 6), st.integers(1, 8), st.sampled_from(["any", "dag", "cyclic"]))
def test_random_query_shapes(seed, k, shape):
    q = random_query(np.random.default_rng(seed), k, ["a", "b"], 0.5, shape=shape)
    assert q.num_nodes == k and q.connected
    if shape == "dag":
        assert q.is_dag()
    if shape == "cyclic" and k >= 2:
        assert not q.is_dag()


@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(KIND_MIX)))
def test_kind_mix_extremes(seed, mix):
    q = random_query(np.random.default_rng(seed), 5, ["a"], KIND_MIX[mix])
    if mix == "C":
        assert all(e.is_direct for e in q.edges)
    if mix == "D":
        assert not any(e.is_direct for e in q.edges)


def test_random_graph_acyclic():
    g = random_graph(np.random.default_rng(1), 50, 3, 150, acyclic=True)
    assert g.is_dag and g.num_edges > 0


def test_templates():
    rng = np.random.default_rng(0)
    assert len(TEMPLATES) >= 12
    for name, (k, _) in TEMPLATES.items():
        q = template_query(name, ["a", "b"], 0.5, rng)
        assert q.num_nodes == k <= 8 and q.connected
    assert topological_order(template_query("cycle3", ["a"], 0, rng)) is None


def test_community_graph_size():
    g = community_graph(np.random.default_rng(0), n=2000, m=8000, num_labels=5)
    assert g.num_nodes == 2000 and g.num_edges == 8000
    assert len(g.label_names) == 5
    again = community_graph(np.random.default_rng(0), n=2000, m=8000, num_labels=5)
    assert np.array_equal(g.edges(), again.edges())

import numpy as np

from rigmatch.fuzz import GROUPS, check_instance, make_instance, run_fuzz, SPACE_BUDGET


def test_instances_are_reproducible():
    a, b = make_instance(7, 3), make_instance(7, 3)
    assert a.query == b.query
    assert np.array_equal(a.graph.edges(), b.graph.edges())
    assert make_instance(7, 4).query != a.query or not np.array_equal(
        make_instance(7, 4).graph.edges(), a.graph.edges())


def test_space_budget_respected():
    for i in range(20):
        inst = make_instance(11, i)
        space = 1
        for x in inst.query.nodes:
            space *= len(inst.graph.inverted_list(x.label))
        assert space <= SPACE_BUDGET
        assert inst.graph.num_nodes <= 50
        assert 3 <= inst.query.num_nodes <= 6


def test_short_run_is_clean(backend):
    rep = run_fuzz(3, 8)
    assert rep.ok, "\n".join(map(str, rep.failures))
    assert rep.instances == 8


def test_every_group_runs():
    assert check_instance(make_instance(2, 0), GROUPS) == []


def test_mutation_is_caught():
    rep = run_fuzz(1, 30, groups=("reduction",), mutate="reduction")
    assert not rep.ok
    msg = str(rep.failures[0])
    assert "reproduce: rigmatch fuzz --seed 1" in msg

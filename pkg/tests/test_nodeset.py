import numpy as np
import pytest
from hypothesis import given, strategies as st

from rigmatch.nodeset import NodeSet, multiway_intersect, multiway_union

from oracles import id_sets


@given(a=id_sets, b=id_sets)
def test_operators_match_python_sets(backend, a, b):
    x, y = NodeSet(a), NodeSet(b)
    assert (x & y) == set(a) & set(b)
    assert (x | y) == set(a) | set(b)
    assert (x - y) == set(a) - set(b)
    assert (x <= y) == (set(a) <= set(b))
    assert list(x) == sorted(set(a))


@given(st.lists(id_sets, min_size=1, max_size=4))
def test_multiway(backend, sets):
    ns = [NodeSet(s) for s in sets]
    assert multiway_intersect(*ns) == set(sets[0]).intersection(*map(set, sets[1:]))
    assert multiway_union(ns) == set().union(*map(set, sets))


def test_basics():
    s = NodeSet([5, 1, 5, 3])
    assert s.tolist() == [1, 3, 5]
    assert 3 in s and 4 not in s and -1 not in s and "x" not in s
    assert s.upto(3) == {1, 3}
    assert s.array.dtype == np.uint32
    assert not s.array.flags.writeable
    assert NodeSet.range(3) == {0, 1, 2}
    assert not NodeSet.empty()
    assert hash(NodeSet([1, 2])) == hash(NodeSet([2, 1]))
    assert NodeSet({2, 1}) == NodeSet([1, 2])
    with pytest.raises(ValueError):
        NodeSet([-1])
    with pytest.raises(ValueError):
        multiway_intersect()
    assert multiway_union([]) == set()

import pytest
from hypothesis import given, strategies as st

from rigmatch.errors import EmptyRIGError, ValidationError
from rigmatch.graph import DataGraph
from rigmatch.order import check_order, explicit_order, make_order, order_jo, order_ri
from rigmatch.query import parse_pattern
from rigmatch.reach import ReachIndex
from rigmatch.rig import build_rig
from rigmatch.generate import random_query


def test_fig2_orders(fig2):
    g, q, ix = fig2
    rig = build_rig(q, g, ix)
    assert order_jo(q, rig).sequence == (0, 1, 2)
    assert order_ri(q).sequence == (0, 1, 2)
    assert str(make_order(q, rig, "2,1,0")) == "2,1,0"
    assert make_order(q, rig, "ri").method == "ri"


def test_jo_prefers_small_candidate_sets(fig2):
    g, _, ix = fig2
    q = parse_pattern("B:b => C:c; A:a -> B")
    rig = build_rig(q, g, ix)
    sizes = [len(c) for c in rig.cos]
    seq = order_jo(q, rig).sequence
    assert sizes[seq[0]] == min(sizes)


def test_ri_starts_at_hub():
    q = parse_pattern("A:a -> H:h; H -> B:b; H -> C:c; C -> D:d")
    seq = order_ri(q).sequence
    assert seq[0] == 1
    # C (qid 3) wins the tie on linked neighbours by its higher degree
    assert seq[1:] == (3, 0, 2, 4)


def test_invalid_orders(fig2):
    g, q, ix = fig2
    chain = parse_pattern("A:a -> B:b -> C:c")
    with pytest.raises(ValidationError):
        check_order(chain, [0, 2, 1])
    with pytest.raises(ValidationError):
        explicit_order(q, "0,1")
    with pytest.raises(ValidationError):
        explicit_order(q, "0,x,1")
    empty = build_rig(parse_pattern("A:a -> Z:z"), g, ix)
    with pytest.raises(EmptyRIGError):
        order_jo(parse_pattern("A:a -> Z:z"), empty)


@given(st.integers(0, 10 ** 6), st.integers(1, 8))
def test_orders_are_connected_permutations(seed, k):
    import numpy as np
    q = random_query(np.random.default_rng(seed), k, ["a", "b"], 0.5)
    check_order(q, order_ri(q).sequence)


def test_ri_path_starts_in_the_middle():
    assert order_ri(parse_pattern("A:a -> B:b -> C:c")).sequence == (1, 0, 2)

"""Random graphs, random connected queries and query templates.

All generators take a :class:`numpy.random.Generator` so runs are
reproducible from a seed.
"""
from __future__ import annotations

import numpy as np

from .graph import DataGraph
from .query import DIRECT, REACH, PatternQuery, QueryEdge

# per-edge probability of a reachability edge for the three query families
KIND_MIX = {"C": 0.0, "H": 0.5, "D": 1.0}


def label_names(k: int) -> list[str]:
    if k <= 26:
        return [chr(ord("a") + i) for i in range(k)]
    return [f"l{i}" for i in range(k)]


def random_graph(rng: np.random.Generator, n: int, num_labels: int, m: int,
                 acyclic: bool = False, self_loops: bool = False) -> DataGraph:
    """Uniform random labeled digraph with about ``m`` distinct edges."""
    labels = [label_names(num_labels)[i] for i in rng.integers(0, num_labels, n)]
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    if acyclic:
        src, dst = np.minimum(src, dst), np.maximum(src, dst)
        keep = src != dst
    else:
        keep = np.ones(m, bool) if self_loops else src != dst
    return DataGraph.from_edges(labels, np.column_stack([src[keep], dst[keep]]))


def random_query(rng: np.random.Generator, k: int, labels: list[str], p_reach: float = 0.5,
                 extra: int | None = None, shape: str = "any") -> PatternQuery:
    """Connected query on ``k`` nodes: a random spanning tree plus ``extra``
    edges, each a reachability edge with probability ``p_reach``.

    ``shape``: ``"dag"`` orients every edge from lower to higher qid,
    ``"cyclic"`` guarantees a directed cycle (needs ``k >= 2``), ``"any"``
    orients at random.
    """
    if extra is None:
        extra = int(rng.integers(0, k))
    pairs: set[tuple[int, int]] = set()

    def add(a, b):
        if shape == "dag" and a > b:
            a, b = b, a
        elif shape != "dag" and rng.random() < 0.5:
            a, b = b, a
        if (a, b) not in pairs and (b, a) not in pairs:
            pairs.add((a, b))

    for i in range(1, k):
        add(int(rng.integers(0, i)), i)
    for _ in range(extra if k >= 2 else 0):
        a, b = (int(x) for x in rng.choice(k, 2, replace=False))
        add(a, b)
    if shape == "cyclic" and k >= 2:
        # reverse copy of a random edge gives a 2-cycle
        tail, head = sorted(pairs)[int(rng.integers(0, len(pairs)))]
        pairs.add((head, tail))
    qlabels = [labels[i] for i in rng.integers(0, len(labels), k)]
    edges = [QueryEdge(a, b, REACH if rng.random() < p_reach else DIRECT)
             for a, b in sorted(pairs)]
    return PatternQuery(qlabels, edges)


# Query shapes: (node count, edges).  Acyclic ones first, then cyclic ones,
# then cliques; edge kinds are assigned on instantiation.
TEMPLATES: dict[str, tuple[int, list[tuple[int, int]]]] = {
    "path3": (3, [(0, 1), (1, 2)]),
    "vee": (3, [(0, 1), (0, 2)]),
    "diamond": (4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
    "star5": (5, [(0, 1), (0, 2), (0, 3), (0, 4)]),
    "tree6": (6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]),
    "ladder6": (6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]),
    "fan7": (7, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 5), (4, 6), (5, 6)]),
    "tree8": (8, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (6, 7)]),
    "cycle3": (3, [(0, 1), (1, 2), (2, 0)]),
    "cycle4": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "bowtie5": (5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]),
    "loop6": (6, [(0, 1), (1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (0, 5)]),
    "clique3": (3, [(0, 1), (0, 2), (1, 2)]),
    "clique4": (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
}


def template_query(name: str, labels: list[str], p_reach: float,
                   rng: np.random.Generator) -> PatternQuery:
    k, pairs = TEMPLATES[name]
    qlabels = [labels[i] for i in rng.integers(0, len(labels), k)]
    edges = [QueryEdge(a, b, REACH if rng.random() < p_reach else DIRECT) for a, b in pairs]
    return PatternQuery(qlabels, edges)


def community_graph(rng: np.random.Generator, n: int = 100_000, m: int = 500_000,
                    num_labels: int = 20, block: int = 40, back_fraction: float = 0.01,
                    label_skew: float = 0.0) -> DataGraph:
    """Disjoint dense blocks with mostly forward edges.

    Nodes form blocks of ``block`` consecutive ids; every edge stays inside
    its block and points from a lower to a higher id except for a
    ``back_fraction`` share, which creates small cycles.  Reachability sets
    are therefore bounded by the block size, as in many real graphs where
    most of the graph is out of reach from any node.  Labels are uniform by
    default; ``label_skew`` > 0 gives a Zipf-like law with that exponent.
    """
    weights = 1.0 / np.arange(1, num_labels + 1) ** label_skew
    names = label_names(num_labels)
    lab = rng.choice(num_labels, n, p=weights / weights.sum())
    draw = int(m * 1.25) + 16
    base = rng.integers(0, n, draw)
    start = (base // block) * block
    size = np.minimum(block, n - start)
    a = start + rng.integers(0, 1 << 30, draw) % size
    b = start + rng.integers(0, 1 << 30, draw) % size
    src, dst = np.minimum(a, b), np.maximum(a, b)
    flip = rng.random(draw) < back_fraction
    src[flip], dst[flip] = dst[flip], src[flip].copy()
    key = src * n + dst
    _, first = np.unique(key[src != dst], return_index=True)
    picked = np.flatnonzero(src != dst)[np.sort(first)][:m]
    return DataGraph.from_edges([names[i] for i in lab],
                                np.column_stack([src[picked], dst[picked]]))

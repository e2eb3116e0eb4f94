"""Search orders for the enumerator.

Every order is a permutation of the query nodes in which each node after
the first is adjacent (ignoring direction) to an earlier one.

* JO: start at the smallest candidate set, then repeatedly take the
  smallest set among nodes adjacent to the prefix.
* RI: start at the highest-degree node, then repeatedly take the node with
  the most neighbours already placed (ties: higher degree, then lower qid).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyRIGError, ValidationError
from .query import PatternQuery
from .rig import RuntimeIndexGraph

JO = "jo"
RI = "ri"
EXPLICIT = "explicit"


@dataclass(frozen=True)
class SearchOrder:
    sequence: tuple[int, ...]
    method: str

    def __iter__(self):
        return iter(self.sequence)

    def __len__(self):
        return len(self.sequence)

    def __str__(self):
        return ",".join(map(str, self.sequence))


def check_order(q: PatternQuery, sequence: Sequence[int]) -> None:
    """Raise :class:`ValidationError` unless ``sequence`` is a connected
    permutation of ``q``'s nodes."""
    seq = list(sequence)
    if sorted(seq) != list(range(q.num_nodes)):
        raise ValidationError(f"order {seq} is not a permutation of 0..{q.num_nodes - 1}")
    placed = {seq[0]}
    for v in seq[1:]:
        if not q.neighbors(v) & placed:
            raise ValidationError(f"order {seq}: node {v} has no earlier neighbour")
        placed.add(v)


def order_jo(q: PatternQuery, rig: RuntimeIndexGraph) -> SearchOrder:
    if rig.is_empty:
        raise EmptyRIGError("cannot order an empty RIG")
    size = [len(c) for c in rig.cos]
    first = min(range(q.num_nodes), key=lambda v: (size[v], v))
    seq, placed, frontier = [first], {first}, set(q.neighbors(first))
    while len(seq) < q.num_nodes:
        v = min(frontier, key=lambda x: (size[x], x))
        seq.append(v)
        placed.add(v)
        frontier = (frontier | q.neighbors(v)) - placed
    return SearchOrder(tuple(seq), JO)


def order_ri(q: PatternQuery) -> SearchOrder:
    deg = [q.degree(v) for v in range(q.num_nodes)]
    first = min(range(q.num_nodes), key=lambda v: (-deg[v], v))
    seq, placed = [first], {first}
    links = [0] * q.num_nodes
    for w in q.neighbors(first):
        links[w] += 1
    while len(seq) < q.num_nodes:
        v = min((x for x in range(q.num_nodes) if x not in placed),
                key=lambda x: (-links[x], -deg[x], x))
        seq.append(v)
        placed.add(v)
        for w in q.neighbors(v):
            links[w] += 1
    return SearchOrder(tuple(seq), RI)


def explicit_order(q: PatternQuery, sequence: Sequence[int] | str) -> SearchOrder:
    if isinstance(sequence, str):
        try:
            sequence = [int(x) for x in sequence.split(",") if x.strip()]
        except ValueError:
            raise ValidationError(f"bad order {sequence!r}") from None
    check_order(q, sequence)
    return SearchOrder(tuple(int(x) for x in sequence), EXPLICIT)


def make_order(q: PatternQuery, rig: RuntimeIndexGraph, spec: str = JO) -> SearchOrder:
    """``spec`` is ``"jo"``, ``"ri"`` or a comma-separated qid list."""
    if spec == JO:
        return order_jo(q, rig)
    if spec == RI:
        return order_ri(q)
    return explicit_order(q, spec)

"""Runtime index graph (RIG).

The RIG is a k-partite graph with one part per query node.  Part ``q`` is the
candidate occurrence set ``cos(q)``; for each query edge the pairs of
candidates satisfying it are stored as CSR rows in both directions, keyed by
the sorted candidate array of the source side.  The enumerator intersects
these rows directly.

``mode="refined"`` (default) takes candidates from double simulation and
trims candidates left without a partner after expansion; ``mode="match"``
uses the unfiltered label matches.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import FORWARD, DataGraph
from .nodeset import NodeSet
from .query import PatternQuery, QueryEdge
from .reach import ReachIndex
from .simulation import PIPELINE_CAP, SIMULATORS, FBRelation, SimOptions

REFINED = "refined"
MATCH = "match"


@dataclass(frozen=True)
class EdgeRows:
    keys: np.ndarray      # sorted uint32 source candidates
    indptr: np.ndarray    # int64, len(keys) + 1
    indices: np.ndarray   # uint32, each row sorted

    def row(self, v: int) -> NodeSet:
        i = int(np.searchsorted(self.keys, v))
        if i == len(self.keys) or self.keys[i] != v:
            return NodeSet.empty()
        return NodeSet._wrap(self.indices[self.indptr[i]:self.indptr[i + 1]])

    def __len__(self):
        return len(self.indices)

    def pairs(self) -> np.ndarray:
        """``(source, target)`` pairs, shape ``(len(self), 2)``."""
        src = np.repeat(self.keys.astype(np.int64), np.diff(self.indptr))
        return np.column_stack([src, self.indices.astype(np.int64)])

    def nonempty(self) -> np.ndarray:
        return self.keys[np.diff(self.indptr) > 0]

    @staticmethod
    def from_pairs(keys: np.ndarray, pairs: np.ndarray) -> "EdgeRows":
        """Rows keyed by ``keys`` from ``pairs`` whose sources lie in ``keys``."""
        if len(pairs):
            pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        pos = np.searchsorted(keys, pairs[:, 0]) if len(pairs) else np.empty(0, np.int64)
        counts = np.bincount(pos, minlength=len(keys)) if len(pairs) else np.zeros(len(keys), np.int64)
        indptr = np.zeros(len(keys) + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return EdgeRows(keys, indptr, pairs[:, 1].astype(np.uint32) if len(pairs)
                        else np.empty(0, np.uint32))


class RuntimeIndexGraph:
    def __init__(self, q: PatternQuery, cos: list[NodeSet], fwd: list[EdgeRows] | None,
                 bwd: list[EdgeRows] | None, mode: str, sim: FBRelation | None = None):
        self.query = q
        self.cos = cos
        self._fwd = fwd
        self._bwd = bwd
        self.mode = mode
        self.sim = sim

    @classmethod
    def empty(cls, q: PatternQuery, mode: str, sim: FBRelation | None = None):
        return cls(q, [NodeSet.empty() for _ in range(q.num_nodes)], None, None, mode, sim)

    @property
    def is_empty(self) -> bool:
        return self._fwd is None

    def rows(self, ei: int, direction: str = FORWARD) -> EdgeRows:
        """Rows of query edge ``ei``: tail to heads (forward) or head to tails."""
        if self.is_empty:
            raise ValueError("empty RIG has no edge rows")
        return self._fwd[ei] if direction == FORWARD else self._bwd[ei]

    def row(self, ei: int, v: int, direction: str = FORWARD) -> NodeSet:
        if self.is_empty:
            return NodeSet.empty()
        return self.rows(ei, direction).row(v)

    def edge_pairs(self, ei: int) -> set[tuple[int, int]]:
        if self.is_empty:
            return set()
        return {(int(a), int(b)) for a, b in self._fwd[ei].pairs().tolist()}

    @property
    def num_nodes(self) -> int:
        return sum(len(c) for c in self.cos)

    @property
    def num_edges(self) -> int:
        return 0 if self.is_empty else sum(len(r) for r in self._fwd)

    def __repr__(self):
        return (f"RuntimeIndexGraph(mode={self.mode}, nodes={self.num_nodes}, "
                f"edges={self.num_edges})")


def expand_pair(cos_tail: NodeSet, cos_head: NodeSet, edge: QueryEdge, g: DataGraph,
                ix: ReachIndex, early_termination: bool = True) -> EdgeRows:
    """Forward rows of one query edge between two finished candidate sets."""
    k = kernels.backend
    src, dst = cos_tail.array, cos_head.array
    if edge.is_direct:
        rptr, idx = k.expand_direct(src, dst, g.fwd_indptr, g.fwd_indices)
    else:
        end_id = g.dfs_end if early_termination else None
        rptr, idx = k.expand_reach(src, dst, ix.reacher(), end_id, g.fwd_indptr, g.fwd_indices)
    return EdgeRows(src, rptr, idx)


def _transpose(fwd: EdgeRows, head_keys: np.ndarray) -> EdgeRows:
    p = fwd.pairs()
    return EdgeRows.from_pairs(head_keys, p[:, ::-1].copy() if len(p) else p)


def _restrict(rows: EdgeRows, src_keep: np.ndarray, dst_keep: np.ndarray) -> EdgeRows:
    p = rows.pairs()
    if len(p):
        p = p[np.isin(p[:, 0], src_keep) & np.isin(p[:, 1], dst_keep)]
    return EdgeRows.from_pairs(src_keep, p)


def build_rig(q: PatternQuery, g: DataGraph, ix: ReachIndex, mode: str = REFINED,
              sim_cap: int | None = PIPELINE_CAP, sim: str = "auto", trim: bool | None = None,
              early_termination: bool = True,
              sim_options: SimOptions | None = None) -> RuntimeIndexGraph:
    """Select candidates, then expand every query edge.

    ``trim`` defaults to on for refined mode and off for match mode.
    """
    if mode not in (REFINED, MATCH):
        raise ValueError(f"mode must be {REFINED!r} or {MATCH!r}")
    if trim is None:
        trim = mode == REFINED
    fb = None
    if mode == REFINED:
        fb = SIMULATORS[sim](q, g, ix, cap=sim_cap, options=sim_options)
        cos = list(fb.sets)
    else:
        cos = [g.inverted_list(x.label) for x in q.nodes]
    if any(len(c) == 0 for c in cos):
        return RuntimeIndexGraph.empty(q, mode, fb)

    fwd = [expand_pair(cos[e.tail], cos[e.head], e, g, ix, early_termination) for e in q.edges]
    if trim:
        while True:
            keep = [c.array for c in cos]
            for ei, e in enumerate(q.edges):
                rows = fwd[ei]
                keep[e.tail] = kernels.backend.intersect(keep[e.tail], rows.nonempty())
                keep[e.head] = kernels.backend.intersect(keep[e.head], np.unique(rows.indices))
            if all(len(a) == len(c) for a, c in zip(keep, cos)):
                break
            cos = [NodeSet._wrap(a) for a in keep]
            if any(len(c) == 0 for c in cos):
                return RuntimeIndexGraph.empty(q, mode, fb)
            fwd = [_restrict(fwd[ei], keep[e.tail], keep[e.head]) for ei, e in enumerate(q.edges)]
    bwd = [_transpose(fwd[ei], cos[e.head].array) for ei, e in enumerate(q.edges)]
    return RuntimeIndexGraph(q, cos, fwd, bwd, mode, fb)


def rig_stats(rig: RuntimeIndexGraph, g: DataGraph | None = None) -> dict:
    """Node and edge counts, plus the size ratio against ``g`` if given."""
    nodes, edges = rig.num_nodes, rig.num_edges
    out = {"nodes": nodes, "edges": edges,
           "cos_sizes": [len(c) for c in rig.cos], "ratio": 0.0}
    if g is not None and (g.num_nodes + g.num_edges):
        out["ratio"] = (nodes + edges) / (g.num_nodes + g.num_edges)
    return out


def dumps_rig(rig: RuntimeIndexGraph, g: DataGraph) -> str:
    """Candidate sets as ``c <qid> <ids>`` lines, then the RIG in the graph
    text format.  All ids are external."""
    buf = io.StringIO()
    for qid, c in enumerate(rig.cos):
        ids = sorted(g.external_set(c))
        buf.write(f"c {qid}" + "".join(f" {x}" for x in ids) + "\n")
    nodes = sorted(set().union(*(g.external_set(c) for c in rig.cos)))
    edges = set()
    if not rig.is_empty:
        for ei in range(len(rig.query.edges)):
            edges |= {(g.to_external(a), g.to_external(b)) for a, b in rig.edge_pairs(ei)}
    buf.write(f"t {len(nodes)} {len(edges)}\n")
    for x in nodes:
        buf.write(f"v {x} {g.label(g.to_internal(x))}\n")
    for s, d in sorted(edges):
        buf.write(f"e {s} {d}\n")
    return buf.getvalue()

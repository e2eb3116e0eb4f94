"""Double simulation: the node filter run before RIG construction.

FB(q) starts as the nodes carrying q's label and shrinks until, for every
query edge (p, q), each member of FB(p) has a partner in FB(q) (forward
condition) and each member of FB(q) has one in FB(p) (backward condition).
A partner is an out-neighbour for direct edges and any node reachable by a
nonempty path for reachability edges.

Three drivers share one pruning primitive:

* :func:`fb_sim_bas`  all edges, fixed order, until nothing changes
* :func:`fb_sim_dag`  acyclic queries: bottom-up forward sweep, then
  top-down backward sweep
* :func:`fb_sim`      general queries: DAG sweeps on a spanning DAG plus
  extra prunes on the back edges

Options (all on by default) skip or shorten work without changing results:
dirty flags skip a check when the partner set has not changed since the
last one, the witness index remembers one partner per candidate, and direct
edges are checked in batch as a union of adjacency rows followed by one
intersection.  Reachability edges are tested pair by pair through the
reachability index, except when the number of pairs would exceed the graph
size; then a single multi-source search over the graph decides all
candidates at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import PreconditionError
from .graph import BACKWARD, FORWARD, DataGraph
from .nodeset import NodeSet
from .query import PatternQuery, QueryEdge, topological_order
from .reach import ReachIndex

PIPELINE_CAP = 3


@dataclass
class SimOptions:
    cap: int | None = None          # max passes; None = run to the fixpoint
    dirty_flags: bool = True
    witness_index: bool = True
    batch_direct: bool = True
    batch_reach: bool = True        # graph search instead of pairwise tests when cheaper
    dag_cut: bool = True            # stop reachability scans past dfs_end


@dataclass
class FBRelation:
    sets: list[NodeSet]
    pass_count: int
    exact: bool
    stats: dict = field(default_factory=dict)

    def __getitem__(self, q: int) -> NodeSet:
        return self.sets[q]

    def __len__(self):
        return len(self.sets)

    @property
    def is_empty(self) -> bool:
        return any(len(s) == 0 for s in self.sets)

    def total(self) -> int:
        return sum(len(s) for s in self.sets)


@dataclass(frozen=True)
class DagDecomposition:
    dag_edges: tuple[QueryEdge, ...]
    back_edges: tuple[QueryEdge, ...]
    topo_order: tuple[int, ...]


class EdgeMatchTester:
    """Structural test for one candidate pair against one query edge.
    Labels are not checked here."""

    def __init__(self, g: DataGraph, ix: ReachIndex):
        self.g = g
        self.ix = ix

    def __call__(self, e: QueryEdge, u: int, v: int) -> bool:
        if e.is_direct:
            return self.g.has_edge(u, v)
        return self.ix.reaches(u, v)


class WitnessIndex:
    """Per-node version stamps (the dirty flags) and, for each checked
    (edge, direction), one partner per candidate.

    Witness arrays are aligned with the candidate array they were computed
    for; when the candidate set shrinks later they are realigned by masking.
    """

    def __init__(self, nq: int):
        self.version = [0] * nq
        self.seen: dict[tuple[int, bool], int] = {}     # target version at last check
        self._wit: dict[tuple[int, bool], tuple[np.ndarray, np.ndarray]] = {}

    def bump(self, q: int) -> None:
        self.version[q] += 1

    def store(self, key, cand: np.ndarray, wit: np.ndarray) -> None:
        self._wit[key] = (cand, wit)

    def aligned(self, key, cand: np.ndarray) -> np.ndarray | None:
        got = self._wit.get(key)
        if got is None:
            return None
        old, wit = got
        if len(old) == len(cand):
            return wit
        # cand is a subset of old
        return wit[np.searchsorted(old, cand)]

    def witness(self, edge_index: int, forward: bool, v: int) -> int | None:
        got = self._wit.get((edge_index, forward))
        if got is None:
            return None
        old, wit = got
        i = int(np.searchsorted(old, v))
        if i < len(old) and old[i] == v and wit[i] >= 0:
            return int(wit[i])
        return None


def batch_direct_check(candidates: NodeSet, frontier: NodeSet, direction: str,
                       g: DataGraph) -> NodeSet:
    """``candidates`` intersected with the union of the ``direction``
    adjacency rows of ``frontier``."""
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    indptr, indices = g.csr(direction)
    return NodeSet._wrap(kernels.backend.batch_filter(candidates.array, indptr, indices,
                                                      frontier.array))


def decompose_dag(q: PatternQuery) -> DagDecomposition:
    """Split the edges into a spanning DAG and back edges by DFS from the
    lowest qid, visiting out-edges in ascending order."""
    color = [0] * q.num_nodes   # 0 white, 1 on stack, 2 done
    back: set[int] = set()
    for root in range(q.num_nodes):
        if color[root]:
            continue
        color[root] = 1
        stack = [(root, iter(q.out_edges(root)))]
        while stack:
            v, it = stack[-1]
            for ei in it:
                w = q.edges[ei].head
                if color[w] == 1:
                    back.add(ei)
                elif color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(q.out_edges(w))))
                    break
            else:
                color[v] = 2
                stack.pop()
    dag_ids = [i for i in range(len(q.edges)) if i not in back]
    order = topological_order(q, dag_ids)
    assert order is not None
    return DagDecomposition(tuple(q.edges[i] for i in dag_ids),
                            tuple(q.edges[i] for i in sorted(back)), tuple(order))


class _Sim:
    """Mutable state shared by the drivers."""

    def __init__(self, q: PatternQuery, g: DataGraph, ix: ReachIndex, opts: SimOptions):
        self.q, self.g, self.opts = q, g, opts
        self.k = kernels.backend
        self.reacher = ix.reacher()
        self.end_id = g.dfs_end if opts.dag_cut else None
        self.fb = [g.inverted_list(x.label).array for x in q.nodes]
        self.wi = WitnessIndex(q.num_nodes)
        self.checks = 0
        self.skipped = 0
        self.searches = 0
        self.empty = any(len(s) == 0 for s in self.fb)

    def prune(self, ei: int, forward: bool) -> bool:
        """Enforce one condition of edge ``ei``; True if a set shrank."""
        if self.empty:
            return False
        e = self.q.edges[ei]
        own, other = (e.tail, e.head) if forward else (e.head, e.tail)
        key = (ei, forward)
        if self.opts.dirty_flags and self.wi.seen.get(key) == self.wi.version[other]:
            self.skipped += 1
            return False
        self.checks += 1
        cand, targets = self.fb[own], self.fb[other]
        g = self.g
        if e.is_direct and self.opts.batch_direct:
            # tails with an out-neighbour in targets = cand ∩ in-neighbours(targets)
            indptr, indices = g.csr(BACKWARD if forward else FORWARD)
            kept = self.k.batch_filter(cand, indptr, indices, targets)
        elif (not e.is_direct and self.opts.batch_reach
              and len(cand) * len(targets) > g.num_nodes + g.num_edges):
            # forward: tails reaching a target = targets' ancestors
            indptr, indices = g.csr(BACKWARD if forward else FORWARD)
            kept = self.k.reach_filter(cand, indptr, indices, targets)
            self.searches += 1
        else:
            wit = self.wi.aligned(key, cand) if self.opts.witness_index else None
            indptr, indices = g.csr(FORWARD if forward else BACKWARD)
            kept, found = self.k.check_edge(e.is_direct, forward, cand, targets, wit,
                                            indptr, indices, self.reacher, self.end_id)
            if self.opts.witness_index:
                self.wi.store(key, kept, found)
        self.wi.seen[key] = self.wi.version[other]
        if len(kept) == len(cand):
            return False
        self.fb[own] = kept
        self.wi.bump(own)
        if len(kept) == 0:
            self.empty = True
        return True

    def result(self, passes: int, exact: bool) -> FBRelation:
        if self.empty:
            sets = [NodeSet.empty() for _ in self.fb]
            exact = True
        else:
            sets = [NodeSet._wrap(s) for s in self.fb]
        return FBRelation(sets, passes, exact,
                          {"checks": self.checks, "skipped": self.skipped, "searches": self.searches,
                           "backend": self.k.NAME, "witnesses": self.wi})

    def run(self, one_pass) -> FBRelation:
        passes = 0
        cap = self.opts.cap
        changed = True
        while changed and not self.empty and (cap is None or passes < cap):
            changed = one_pass()
            passes += 1
        if self.empty:
            return self.result(passes, True)
        if passes == 0:
            # nothing to check at all still counts as one (trivial) pass
            passes = 1
            changed = False
        return self.result(passes, not changed)


def _options(cap, options: SimOptions | None) -> SimOptions:
    opts = SimOptions() if options is None else SimOptions(**vars(options))
    if cap is not None:
        opts.cap = cap
    if opts.cap is not None and (isinstance(opts.cap, bool) or opts.cap < 1):
        raise ValueError("cap must be a positive integer or None")
    return opts


def fb_sim_bas(q: PatternQuery, g: DataGraph, ix: ReachIndex, cap: int | None = None,
               options: SimOptions | None = None) -> FBRelation:
    """Basic fixpoint: each pass prunes forward over every edge, then
    backward over every edge, in ascending (tail, head) order."""
    s = _Sim(q, g, ix, _options(cap, options))
    m = len(q.edges)

    def one_pass():
        changed = False
        for ei in range(m):
            changed |= s.prune(ei, True)
        for ei in range(m):
            changed |= s.prune(ei, False)
        return changed

    return s.run(one_pass)


def forward_sim_only(q: PatternQuery, g: DataGraph, ix: ReachIndex,
                     options: SimOptions | None = None) -> FBRelation:
    """Largest relation under the label and forward conditions only."""
    s = _Sim(q, g, ix, _options(None, options))
    return s.run(lambda: any([s.prune(ei, True) for ei in range(len(q.edges))]))


def backward_sim_only(q: PatternQuery, g: DataGraph, ix: ReachIndex,
                      options: SimOptions | None = None) -> FBRelation:
    """Largest relation under the label and backward conditions only."""
    s = _Sim(q, g, ix, _options(None, options))
    return s.run(lambda: any([s.prune(ei, False) for ei in range(len(q.edges))]))


def _dag_pass(s: _Sim, q: PatternQuery, order, dag_ids: set[int]) -> bool:
    changed = False
    for v in reversed(order):
        for ei in q.out_edges(v):
            if ei in dag_ids:
                changed |= s.prune(ei, True)
    for v in order:
        for ei in q.in_edges(v):
            if ei in dag_ids:
                changed |= s.prune(ei, False)
    return changed


def fb_sim_dag(q: PatternQuery, g: DataGraph, ix: ReachIndex, cap: int | None = None,
               options: SimOptions | None = None) -> FBRelation:
    """Acyclic queries only: per pass, forward prunes in reverse topological
    order, then backward prunes in topological order."""
    order = topological_order(q)
    if order is None:
        raise PreconditionError("fb_sim_dag needs an acyclic query")
    s = _Sim(q, g, ix, _options(cap, options))
    ids = set(range(len(q.edges)))
    return s.run(lambda: _dag_pass(s, q, order, ids))


def fb_sim(q: PatternQuery, g: DataGraph, ix: ReachIndex, cap: int | None = None,
           options: SimOptions | None = None) -> FBRelation:
    """Any query: DAG sweeps over a spanning DAG, then both prunes on each
    back edge, repeated until stable (or ``cap`` passes)."""
    if q.is_dag():
        return fb_sim_dag(q, g, ix, cap, options)
    dec = decompose_dag(q)
    index = {e: i for i, e in enumerate(q.edges)}
    dag_ids = {index[e] for e in dec.dag_edges}
    back_ids = [index[e] for e in dec.back_edges]
    s = _Sim(q, g, ix, _options(cap, options))

    def one_pass():
        changed = _dag_pass(s, q, dec.topo_order, dag_ids)
        for ei in back_ids:
            changed |= s.prune(ei, True)
            changed |= s.prune(ei, False)
        return changed

    return s.run(one_pass)


SIMULATORS = {"bas": fb_sim_bas, "dag": fb_sim_dag, "auto": fb_sim}

"""Exact reachability index.

Strongly connected components are collapsed first (Tarjan), with component
ids assigned in topological order.  On the condensation every component gets
a depth-first interval and a pair of hashed bit signatures (descendants and
ancestors, Bloom-filter style).  Intervals and signatures settle most
queries; whatever remains is decided by a pruned depth-first search, so
answers are always exact.

``reaches(u, v)`` means a path with at least one edge: ``reaches(u, u)`` is
true only for nodes on a cycle (a self-loop counts).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GraphRangeError
from .graph import DataGraph, _csr
from .nodeset import NodeSet


@dataclass(frozen=True)
class IntervalLabel:
    begin: int
    end: int


class ReachIndex:
    def __init__(self, g: DataGraph, bloom_bits: int = 64, cache_size: int = 1 << 20):
        if bloom_bits <= 0 or bloom_bits % 64:
            raise ValueError("bloom_bits must be a positive multiple of 64")
        self.graph = g
        self.bloom_bits = bloom_bits
        self.cache_size = cache_size
        k = kernels.backend
        n = g.num_nodes
        raw, ncomp = k.tarjan_scc(g.fwd_indptr, g.fwd_indices, n)
        # Tarjan completes sinks first; flip so edges go from low to high ids
        self.scc_id = (ncomp - 1 - raw).astype(np.int32)
        self.num_components = ncomp
        e = g.edges()
        cs, cd = self.scc_id[e[:, 0]], self.scc_id[e[:, 1]]
        sizes = np.bincount(self.scc_id, minlength=ncomp)
        cyclic = sizes >= 2
        loops = e[:, 0] == e[:, 1]
        cyclic[self.scc_id[e[loops, 0]]] = True
        self.cyclic = cyclic.astype(np.uint8)
        cross = cs != cd
        self.cindptr, self.cindices = _csr(cs[cross].astype(np.int64), cd[cross].astype(np.int64), ncomp)
        self.begin, self.end = k.dfs_intervals(self.cindptr, self.cindices, ncomp)
        rank = np.empty(ncomp, dtype=np.int64)
        rank[np.argsort(self.begin, kind="stable")] = np.arange(ncomp)
        # contiguous discovery ranges share a bit
        self.hashbit = ((rank * bloom_bits) // max(ncomp, 1)).astype(np.int32)
        self.sig_out, self.sig_in = k.bloom_labels(self.cindptr, self.cindices, ncomp,
                                                   self.hashbit, bloom_bits // 64)
        self._reachers = {}
        self._cache = {}
        self._lock = threading.Lock()

    @property
    def condensed_order(self) -> np.ndarray:
        """Component ids in topological order."""
        return np.arange(self.num_components)

    def interval(self, v: int) -> IntervalLabel:
        c = self.scc_id[v]
        return IntervalLabel(int(self.begin[c]), int(self.end[c]))

    def component(self, v: int) -> NodeSet:
        return NodeSet(np.flatnonzero(self.scc_id == self.scc_id[v]))

    def reacher(self):
        """Kernel-level query object for the active backend."""
        name = kernels.backend.NAME
        r = self._reachers.get(name)
        if r is None:
            r = kernels.backend.Reacher(self.scc_id, self.cyclic, self.begin, self.end,
                                        self.sig_out, self.sig_in, self.cindptr, self.cindices)
            self._reachers[name] = r
        return r

    def reaches(self, u: int, v: int) -> bool:
        n = self.graph.num_nodes
        if not (0 <= u < n and 0 <= v < n):
            raise GraphRangeError(f"reaches({u}, {v}): node outside [0, {n})")
        key = (u, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        with self._lock:
            ans = bool(self.reacher().reaches(u, v))
            if len(self._cache) >= self.cache_size:
                self._cache.clear()
            self._cache[key] = ans
        return ans

    def descendants(self, u: int) -> NodeSet:
        """All ``v`` with ``reaches(u, v)``; a plain BFS, used by diagnostics."""
        g = self.graph
        seen = np.zeros(g.num_nodes, dtype=bool)
        frontier = g.adjacency(u).array
        while len(frontier):
            frontier = frontier[~seen[frontier]]
            seen[frontier] = True
            if len(frontier):
                frontier = kernels.backend.union_rows(g.fwd_indptr, g.fwd_indices, frontier)
        return NodeSet(np.flatnonzero(seen))


def build_reach_index(g: DataGraph, bloom_bits: int = 64, cache_size: int = 1 << 20) -> ReachIndex:
    return ReachIndex(g, bloom_bits=bloom_bits, cache_size=cache_size)

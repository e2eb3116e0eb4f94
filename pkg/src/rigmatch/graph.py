"""Immutable node-labeled directed data graph.

Adjacency is kept in CSR form in both directions with sorted rows, so every
row is directly usable as a :class:`~rigmatch.nodeset.NodeSet`.  Nodes are
renumbered so that ascending internal id follows depth-first discovery order
of the strongly connected components (plain DFS order when the graph is
acyclic); ``dfs_end[v]`` then bounds the ids ``v`` can reach.  The original
(external) ids are kept for output.

Text format::

    t <num_nodes> <num_edges>
    v <id> <label>        # num_nodes lines
    e <src> <dst>         # num_edges lines
"""
from __future__ import annotations

import io
import os
from typing import Iterable, TextIO

import numpy as np

from . import kernels
from .errors import FormatError, GraphRangeError, ParseError
from .nodeset import NodeSet

FORWARD = "forward"
BACKWARD = "backward"


def _csr(src: np.ndarray, dst: np.ndarray, n: int):
    """Sorted, de-duplicated CSR rows of ``src -> dst``."""
    if len(src):
        key = np.unique(src.astype(np.int64) * max(n, 1) + dst.astype(np.int64))
        src, dst = key // max(n, 1), key % max(n, 1)
    counts = np.bincount(src, minlength=n) if len(src) else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, dst.astype(np.uint32)


class DataGraph:
    """Node-labeled directed graph; construct with :meth:`from_edges` or
    :func:`load_graph`."""

    def __init__(self, labels, label_names, fwd, bwd, ext_ids, is_dag, dfs_end):
        self.labels = labels
        self.label_names = list(label_names)
        self._label_code = {name: i for i, name in enumerate(self.label_names)}
        self.fwd_indptr, self.fwd_indices = fwd
        self.bwd_indptr, self.bwd_indices = bwd
        self.ext_ids = ext_ids
        self.int_ids = np.empty_like(ext_ids)
        self.int_ids[ext_ids] = np.arange(len(ext_ids), dtype=ext_ids.dtype)
        self.is_dag = is_dag
        self.dfs_end = dfs_end
        for arr in (labels, self.fwd_indptr, self.fwd_indices, self.bwd_indptr,
                    self.bwd_indices, ext_ids, self.int_ids):
            arr.flags.writeable = False
        if dfs_end is not None:
            dfs_end.flags.writeable = False
        order = np.argsort(labels, kind="stable").astype(np.uint32)
        bounds = np.concatenate([[0], np.cumsum(np.bincount(labels, minlength=len(self.label_names)))])
        self._inverted = [NodeSet._wrap(np.sort(order[bounds[i]:bounds[i + 1]]))
                          for i in range(len(self.label_names))]

    @classmethod
    def from_edges(cls, labels: list[str], edges: Iterable[tuple[int, int]],
                   renumber: bool = True) -> "DataGraph":
        """Build from external ids ``0..len(labels)-1``.  Duplicate edges are
        dropped; self-loops are kept."""
        n = len(labels)
        names = sorted(set(labels))
        code = {name: i for i, name in enumerate(names)}
        lab = np.fromiter((code[x] for x in labels), dtype=np.int32, count=n)
        pairs = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                           dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            bad = pairs[(pairs < 0).any(axis=1) | (pairs >= n).any(axis=1)][0]
            raise GraphRangeError(f"edge {tuple(bad.tolist())} references a node outside [0, {n})")
        src, dst = pairs[:, 0], pairs[:, 1]
        fwd = _csr(src, dst, n)
        k = kernels.backend
        comp, ncomp = k.tarjan_scc(fwd[0], fwd[1], n)
        is_dag = ncomp == n and not bool(np.any(src == dst))
        ext_ids = np.arange(n, dtype=np.int64)
        dfs_end = None
        if renumber and n:
            # order nodes by the DFS discovery time of their component in the
            # condensation; whatever u reaches is discovered before u's
            # component is left, hence has an id <= dfs_end[u]
            cross = comp[src] != comp[dst]
            cptr, cidx = _csr(comp[src][cross].astype(np.int64),
                              comp[dst][cross].astype(np.int64), ncomp)
            begin, end = k.dfs_intervals(cptr, cidx, ncomp)
            ext_ids = np.lexsort((np.arange(n), begin[comp])).astype(np.int64)
            new_of_old = np.empty(n, dtype=np.int64)
            new_of_old[ext_ids] = np.arange(n)
            sorted_begin = begin[comp][ext_ids]
            dfs_end = (np.searchsorted(sorted_begin, end[comp][ext_ids]) - 1).astype(np.int64)
            src, dst = new_of_old[src], new_of_old[dst]
            lab = lab[ext_ids]
            fwd = _csr(src, dst, n)
        bwd = _csr(dst, src, n)
        return cls(lab, names, fwd, bwd, ext_ids, is_dag, dfs_end)

    # -- sizes -----------------------------------------------------------
    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.fwd_indices)

    def __repr__(self):
        return (f"DataGraph(nodes={self.num_nodes}, edges={self.num_edges}, "
                f"labels={len(self.label_names)}, dag={self.is_dag})")

    # -- access ----------------------------------------------------------
    def _check(self, v):
        if not 0 <= v < self.num_nodes:
            raise GraphRangeError(f"node {v} outside [0, {self.num_nodes})")

    def label(self, v: int) -> str:
        self._check(v)
        return self.label_names[self.labels[v]]

    def label_code(self, name: str) -> int | None:
        return self._label_code.get(name)

    def inverted_list(self, label: str) -> NodeSet:
        """Nodes carrying ``label`` (empty if the label is unused)."""
        c = self._label_code.get(label)
        return self._inverted[c] if c is not None else NodeSet.empty()

    def adjacency(self, v: int, direction: str = FORWARD) -> NodeSet:
        self._check(v)
        if direction == FORWARD:
            ptr, idx = self.fwd_indptr, self.fwd_indices
        elif direction == BACKWARD:
            ptr, idx = self.bwd_indptr, self.bwd_indices
        else:
            raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
        return NodeSet._wrap(idx[ptr[v]:ptr[v + 1]])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency(u, FORWARD)

    def csr(self, direction: str):
        if direction == FORWARD:
            return self.fwd_indptr, self.fwd_indices
        return self.bwd_indptr, self.bwd_indices

    def edges(self):
        """Internal-id edge pairs as an ``(m, 2)`` array, sorted."""
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), np.diff(self.fwd_indptr))
        return np.column_stack([src, self.fwd_indices.astype(np.int64)])

    # -- id mapping --------------------------------------------------------
    def to_external(self, v: int) -> int:
        return int(self.ext_ids[v])

    def to_internal(self, x: int) -> int:
        if not 0 <= x < self.num_nodes:
            raise GraphRangeError(f"node {x} outside [0, {self.num_nodes})")
        return int(self.int_ids[x])

    def external_set(self, nodes: Iterable[int]) -> set[int]:
        return {int(self.ext_ids[v]) for v in nodes}

    def internal_set(self, nodes: Iterable[int]) -> NodeSet:
        return NodeSet([self.to_internal(x) for x in nodes])

    def subgraph(self, nodes: Iterable[int]) -> "DataGraph":
        """Induced subgraph on internal ids ``nodes``, renumbered densely in
        ascending order of the original external ids."""
        keep = np.unique(np.asarray(list(nodes), dtype=np.int64))
        keep = keep[np.argsort(self.ext_ids[keep], kind="stable")]
        pos = np.full(self.num_nodes, -1, dtype=np.int64)
        pos[keep] = np.arange(len(keep))
        e = self.edges()
        e = e[(pos[e[:, 0]] >= 0) & (pos[e[:, 1]] >= 0)]
        labels = [self.label_names[c] for c in self.labels[keep]]
        return DataGraph.from_edges(labels, pos[e])


def load_graph(source: TextIO | str | os.PathLike) -> DataGraph:
    """Parse the graph text format from a stream (or a path)."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return load_graph(fh)
    n = m = None
    labels: list[str | None] = []
    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(source, 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        tag = parts[0]
        try:
            if n is None:
                if tag != "t" or len(parts) != 3:
                    raise ParseError("expected header 't <num_nodes> <num_edges>'", lineno)
                n, m = int(parts[1]), int(parts[2])
                if n < 0 or m < 0:
                    raise ParseError("negative count in header", lineno)
                labels = [None] * n
            elif tag == "e" and len(parts) == 3:
                s, d = int(parts[1]), int(parts[2])
                if not (0 <= s < n and 0 <= d < n):
                    raise GraphRangeError(f"line {lineno}: edge ({s}, {d}) outside [0, {n})")
                src.append(s)
                dst.append(d)
            elif tag == "v" and len(parts) == 3:
                v = int(parts[1])
                if not 0 <= v < n:
                    raise GraphRangeError(f"line {lineno}: node {v} outside [0, {n})")
                if labels[v] is not None:
                    raise FormatError(f"node {v} declared twice", lineno)
                labels[v] = parts[2]
            else:
                raise ParseError(f"unrecognised line {line.strip()!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad integer in {line.strip()!r}", lineno) from None
    if n is None:
        raise ParseError("missing 't' header line")
    missing = [v for v, lab in enumerate(labels) if lab is None]
    if missing:
        raise FormatError(f"node {missing[0]} has no label ({len(missing)} unlabeled)")
    if len(src) != m:
        raise FormatError(f"header declares {m} edges, found {len(src)}")
    edges = np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])
    return DataGraph.from_edges(labels, edges)


def loads_graph(text: str) -> DataGraph:
    return load_graph(io.StringIO(text))


def dump_graph(g: DataGraph, out: TextIO) -> None:
    """Write ``g`` in the text format using external ids, ascending."""
    e = g.edges()
    ext = g.ext_ids
    pairs = np.column_stack([ext[e[:, 0]], ext[e[:, 1]]]) if len(e) else np.empty((0, 2), np.int64)
    if len(pairs):
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    out.write(f"t {g.num_nodes} {len(pairs)}\n")
    names = g.label_names
    lab_ext = np.empty(g.num_nodes, dtype=np.int64)
    lab_ext[ext] = g.labels
    out.write("".join(f"v {x} {names[c]}\n" for x, c in enumerate(lab_ext.tolist())))
    out.write("".join(f"e {s} {d}\n" for s, d in pairs.tolist()))


def dumps_graph(g: DataGraph) -> str:
    buf = io.StringIO()
    dump_graph(g, buf)
    return buf.getvalue()

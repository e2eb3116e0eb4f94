"""Hybrid pattern queries: parsing, transitive closure and reduction.

A query edge is either *direct* (maps to one data edge) or *reachability*
(maps to a nonempty data path).  Two text syntaxes are accepted:

file format (one item per line)::

    n <qid> <label>
    d <tail> <head>       # direct edge
    r <tail> <head>       # reachability edge

arrow shorthand, statements separated by ``;`` or newlines::

    A:a -> B:b; A -> C:c; B => C

where ``->`` is direct, ``=>`` is reachability and ``Name:label`` declares a
node (the label defaults to the name).  Nodes get qids in order of first
appearance.
"""
from __future__ import annotations

import io
import os
import re
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import ParseError, PreconditionError, ValidationError

DIRECT = "direct"
REACH = "reachability"

SOFT_NODE_LIMIT = 64


@dataclass(frozen=True)
class QueryNode:
    qid: int
    label: str


@dataclass(frozen=True, order=True)
class QueryEdge:
    tail: int
    head: int
    kind: str

    @property
    def is_direct(self) -> bool:
        return self.kind == DIRECT

    def __str__(self):
        return f"{self.tail}{'->' if self.is_direct else '=>'}{self.head}"


class PatternQuery:
    """Immutable query graph.  Edges are kept sorted by ``(tail, head, kind)``,
    which is also the fixed visiting order used by the simulations."""

    def __init__(self, labels: Iterable[str], edges: Iterable[QueryEdge | tuple],
                 require_connected: bool = True):
        self.nodes = tuple(QueryNode(i, str(lab)) for i, lab in enumerate(labels))
        n = len(self.nodes)
        if n == 0:
            raise ValidationError("a query needs at least one node")
        seen = set()
        for e in edges:
            e = e if isinstance(e, QueryEdge) else QueryEdge(*e)
            if e.kind not in (DIRECT, REACH):
                raise ValidationError(f"unknown edge kind {e.kind!r}")
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise ValidationError(f"edge {e} references an unknown node")
            if e.tail == e.head:
                raise ValidationError(f"self-loop on query node {e.tail}")
            seen.add(e)
        self.edges = tuple(sorted(seen))
        self._out = [[] for _ in range(n)]
        self._in = [[] for _ in range(n)]
        for i, e in enumerate(self.edges):
            self._out[e.tail].append(i)
            self._in[e.head].append(i)
        self.connected = self._connected()
        if require_connected and not self.connected:
            raise ValidationError("query graph is not connected")

    # -- structure -------------------------------------------------------
    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def labels(self) -> list[str]:
        return [x.label for x in self.nodes]

    def label(self, q: int) -> str:
        return self.nodes[q].label

    def out_edges(self, q: int) -> list[int]:
        """Indices into :attr:`edges` of edges leaving ``q``."""
        return self._out[q]

    def in_edges(self, q: int) -> list[int]:
        return self._in[q]

    def neighbors(self, q: int) -> set[int]:
        """Undirected neighbours."""
        return ({self.edges[i].head for i in self._out[q]}
                | {self.edges[i].tail for i in self._in[q]})

    def degree(self, q: int) -> int:
        return len(self.neighbors(q))

    def _connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            q = todo.pop()
            for r in self.neighbors(q):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return len(seen) == self.num_nodes

    def is_dag(self) -> bool:
        return topological_order(self) is not None

    def kinds(self) -> dict[tuple[int, int], set[str]]:
        out: dict[tuple[int, int], set[str]] = {}
        for e in self.edges:
            out.setdefault((e.tail, e.head), set()).add(e.kind)
        return out

    def with_edges(self, edges: Iterable[QueryEdge]) -> "PatternQuery":
        return PatternQuery(self.labels, edges, require_connected=False)

    # -- comparison / text -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PatternQuery):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self):
        return hash((tuple(self.labels), self.edges))

    def __repr__(self):
        return f"PatternQuery(labels={self.labels}, edges=[{', '.join(map(str, self.edges))}])"

    def to_text(self) -> str:
        lines = [f"n {x.qid} {x.label}" for x in self.nodes]
        lines += [f"{'d' if e.is_direct else 'r'} {e.tail} {e.head}" for e in self.edges]
        return "\n".join(lines) + "\n"


def topological_order(q: PatternQuery, edge_ids: Iterable[int] | None = None) -> list[int] | None:
    """Kahn's method with smallest-qid tie-breaking over the chosen edges
    (all by default); ``None`` if they contain a directed cycle."""
    import heapq

    ids = range(len(q.edges)) if edge_ids is None else edge_ids
    indeg = [0] * q.num_nodes
    succ = [[] for _ in range(q.num_nodes)]
    for i in ids:
        e = q.edges[i]
        succ[e.tail].append(e.head)
        indeg[e.head] += 1
    heap = [v for v in range(q.num_nodes) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == q.num_nodes else None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _build(labels: list[str], edges: list[QueryEdge]) -> PatternQuery:
    pairs: dict[tuple[int, int], str] = {}
    for e in edges:
        prev = pairs.setdefault((e.tail, e.head), e.kind)
        if prev != e.kind:
            raise ValidationError(f"edge ({e.tail}, {e.head}) given as both direct and reachability")
    if len(labels) > SOFT_NODE_LIMIT:
        warnings.warn(f"query has {len(labels)} nodes (soft limit {SOFT_NODE_LIMIT})", stacklevel=3)
    return PatternQuery(labels, edges)


def parse_query(source: TextIO | str | os.PathLike) -> PatternQuery:
    """Parse the line-oriented query format from a stream or path."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return parse_query(fh)
    labels: dict[int, str] = {}
    edges: list[QueryEdge] = []
    for lineno, line in enumerate(source, 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        tag = parts[0]
        if tag not in ("n", "d", "r") or len(parts) != 3:
            raise ParseError(f"unrecognised line {line.strip()!r}", lineno)
        if tag == "n":
            try:
                qid = int(parts[1])
            except ValueError:
                raise ParseError(f"bad qid {parts[1]!r}", lineno) from None
            if qid in labels:
                raise ParseError(f"query node {qid} declared twice", lineno)
            if edges:
                raise ParseError("node lines must precede edge lines", lineno)
            labels[qid] = parts[2]
        else:
            try:
                tail, head = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"bad edge {line.strip()!r}", lineno) from None
            if tail not in labels or head not in labels:
                raise ParseError(f"edge ({tail}, {head}) references an undeclared node", lineno)
            edges.append(QueryEdge(tail, head, DIRECT if tag == "d" else REACH))
    if not labels:
        raise ParseError("query declares no nodes")
    if sorted(labels) != list(range(len(labels))):
        raise ParseError("query node ids must be 0..n-1")
    return _build([labels[i] for i in range(len(labels))], edges)


def loads_query(text: str) -> PatternQuery:
    return parse_query(io.StringIO(text))


_ARROW = re.compile(r"\s*(=>|->)\s*")


def parse_pattern(text: str) -> PatternQuery:
    """Parse the arrow shorthand, e.g. ``"A:a -> B:b; A -> C:c; B => C"``."""
    names: dict[str, int] = {}
    labels: list[str] = []
    edges: list[QueryEdge] = []

    def node(token: str, lineno: int) -> int:
        name, _, label = token.strip().partition(":")
        if not name or not re.fullmatch(r"[\w.\-]+", name) or (label and not re.fullmatch(r"\S+", label)):
            raise ParseError(f"bad node token {token!r}", lineno)
        if name not in names:
            names[name] = len(labels)
            labels.append(label or name)
        elif label and labels[names[name]] != label:
            raise ParseError(f"node {name} relabelled as {label!r}", lineno)
        return names[name]

    for lineno, stmt in enumerate(re.split(r"[;\n]", text), 1):
        stmt = stmt.split("#", 1)[0].strip()
        if not stmt:
            continue
        pieces = _ARROW.split(stmt)
        prev = node(pieces[0], lineno)
        for arrow, tok in zip(pieces[1::2], pieces[2::2]):
            cur = node(tok, lineno)
            edges.append(QueryEdge(prev, cur, DIRECT if arrow == "->" else REACH))
            prev = cur
    if not labels:
        raise ParseError("empty pattern")
    return _build(labels, edges)


# ---------------------------------------------------------------------------
# closure / reduction
# ---------------------------------------------------------------------------

def _reachable_from(n: int, succ: list[list[int]], src: int) -> set[int]:
    seen: set[int] = set()
    todo = deque(succ[src])
    while todo:
        v = todo.popleft()
        if v not in seen:
            seen.add(v)
            todo.extend(succ[v])
    return seen


def transitive_closure(q: PatternQuery) -> PatternQuery:
    """Add a reachability edge ``(x, y)`` for every ``x != y`` joined by a
    path in ``q``; direct edges are kept as they are."""
    succ = [[] for _ in range(q.num_nodes)]
    for e in q.edges:
        succ[e.tail].append(e.head)
    edges = [e for e in q.edges if e.is_direct]
    for x in range(q.num_nodes):
        edges += [QueryEdge(x, y, REACH) for y in _reachable_from(q.num_nodes, succ, x) if y != x]
    return PatternQuery(q.labels, edges, require_connected=q.connected)


def transitive_reduction(q: PatternQuery) -> PatternQuery:
    """Drop reachability edges implied by other paths.

    A reachability edge sharing its endpoints with a direct edge goes first;
    then every reachability edge, in ascending ``(tail, head)`` order, is
    removed when its head stays reachable from its tail without it.  Direct
    edges are never removed.
    """
    direct_pairs = {(e.tail, e.head) for e in q.edges if e.is_direct}
    edges = [e for e in q.edges if e.is_direct or (e.tail, e.head) not in direct_pairs]
    for e in sorted(x for x in edges if not x.is_direct):
        succ = [[] for _ in range(q.num_nodes)]
        for f in edges:
            if f is not e:
                succ[f.tail].append(f.head)
        if e.head in _reachable_from(q.num_nodes, succ, e.tail):
            edges.remove(e)
    return PatternQuery(q.labels, edges, require_connected=q.connected)


def is_transitive(q: PatternQuery, e: QueryEdge) -> bool:
    """Whether ``e`` has an alternative path between its endpoints."""
    if e not in q.edges:
        raise PreconditionError(f"{e} is not an edge of the query")
    succ = [[] for _ in range(q.num_nodes)]
    for f in q.edges:
        if f != e:
            succ[f.tail].append(f.head)
    return e.head in _reachable_from(q.num_nodes, succ, e.tail)

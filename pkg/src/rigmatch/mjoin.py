"""Answer enumeration over a RIG by multi-way intersection.

Query nodes are bound one per level in search order.  The candidates at a
level are the RIG rows of the values already bound at joined levels,
intersected smallest first (or the whole candidate set when nothing is
joined yet).  Tuples are reported in qid order using internal node ids;
pass ``graph`` to receive external ids instead.

:func:`brute_force_oracle` is an independent nested-loop evaluator for
small instances, used by the tests and the fuzzer.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import OracleGuardError, ValidationError
from .graph import BACKWARD, FORWARD, DataGraph
from .order import SearchOrder, check_order
from .query import PatternQuery
from .rig import RuntimeIndexGraph

ORACLE_GUARD = 10 ** 7
BENCH_MAX_MATCHES = 10 ** 7
BENCH_TIMEOUT = 600.0
_BLOCK = 4096


@dataclass(frozen=True)
class EnumLimits:
    max_matches: int | None = None
    timeout: float | None = None     # seconds

    @classmethod
    def bench(cls) -> "EnumLimits":
        return cls(BENCH_MAX_MATCHES, BENCH_TIMEOUT)


@dataclass
class EnumReport:
    matches: int
    completed: bool
    elapsed: float                   # seconds
    peak_cells: int = 0
    timed_out: bool = False


def _enumerator(q: PatternQuery, rig: RuntimeIndexGraph, order: SearchOrder):
    seq = list(order.sequence)
    check_order(q, seq)
    level = {v: i for i, v in enumerate(seq)}
    cons = [[] for _ in seq]
    for ei, e in enumerate(q.edges):
        lt, lh = level[e.tail], level[e.head]
        if lt < lh:
            r = rig.rows(ei, FORWARD)
            cons[lh].append((lt, r.keys, r.indptr, r.indices))
        else:
            r = rig.rows(ei, BACKWARD)
            cons[lt].append((lh, r.keys, r.indptr, r.indices))
    return kernels.backend.Enumerator([rig.cos[v].array for v in seq], cons, seq)


def mjoin(q: PatternQuery, rig: RuntimeIndexGraph, order: SearchOrder,
          limits: EnumLimits | None = None, sink: Callable[[tuple], object] | None = None,
          batch_sink: Callable[[np.ndarray], object] | None = None,
          graph: DataGraph | None = None) -> EnumReport:
    """Enumerate the answer.

    ``sink`` receives one tuple per match; ``batch_sink`` receives blocks as
    ``(rows, num_query_nodes)`` arrays.  With neither, matches are only
    counted.  ``completed`` is False when a limit stopped the run early.
    """
    limits = limits or EnumLimits()
    t0 = time.monotonic()
    if rig.is_empty:
        return EnumReport(0, True, time.monotonic() - t0)
    en = _enumerator(q, rig, order)
    max_m = -1 if limits.max_matches is None else int(limits.max_matches)
    if max_m < -1:
        raise ValidationError("max_matches must be non-negative")
    deadline = -1.0 if limits.timeout is None else t0 + float(limits.timeout)
    ext = graph.ext_ids if graph is not None else None
    fill = sink is not None or batch_sink is not None
    buf = np.empty((_BLOCK, q.num_nodes), dtype=np.uint32) if fill else None
    while True:
        rows, status = en.run(max_m, deadline, buf)
        if rows:
            # the buffer is reused for the next block, so hand out a copy
            block = buf[:rows].copy() if ext is None else ext[buf[:rows]]
            if batch_sink is not None:
                batch_sink(block)
            if sink is not None:
                for t in block.tolist():
                    sink(tuple(t))
        if status != kernels.backend.MORE:
            break
    return EnumReport(int(en.emitted), status == kernels.backend.EXHAUSTED,
                      time.monotonic() - t0, int(en.peak_cells),
                      status == kernels.backend.TIMED_OUT)


def count_matches(q: PatternQuery, rig: RuntimeIndexGraph, order: SearchOrder,
                  limits: EnumLimits | None = None) -> int:
    return mjoin(q, rig, order, limits).matches


def collect(q: PatternQuery, rig: RuntimeIndexGraph, order: SearchOrder,
            limits: EnumLimits | None = None, graph: DataGraph | None = None) -> list[tuple]:
    """Matches as a list of tuples, in emission order."""
    out: list[tuple] = []
    mjoin(q, rig, order, limits, sink=out.append, graph=graph)
    return out


def brute_force_oracle(q: PatternQuery, g: DataGraph, reach,
                       guard: int = ORACLE_GUARD) -> set[tuple[int, ...]]:
    """Exact answer by nested loops over label matches.

    ``reach`` is any object with ``reaches(u, v)``.  Refuses instances whose
    search space (product of label-match sizes) exceeds ``guard``.
    """
    ms = []
    for x in q.nodes:
        code = g.label_code(x.label)
        ms.append([] if code is None else np.flatnonzero(g.labels == code).tolist())
    estimate = 1
    for m in ms:
        estimate *= len(m)
    if estimate > guard:
        raise OracleGuardError(estimate, guard)
    if estimate == 0:
        return set()
    edges = set(map(tuple, g.edges().tolist()))
    # assign nodes in breadth-first order from qid 0 so that every edge is
    # tested as soon as both of its ends are fixed
    seq = [0]
    for v in seq:
        seq += [w for w in sorted(q.neighbors(v)) if w not in seq]
    seq += [v for v in range(q.num_nodes) if v not in seq]
    step = {v: i for i, v in enumerate(seq)}
    due = [[] for _ in seq]
    for e in q.edges:
        due[max(step[e.tail], step[e.head])].append(e)
    n = len(seq)
    out: set[tuple[int, ...]] = set()
    a = [0] * n

    def extend(i):
        if i == n:
            out.add(tuple(a))
            return
        for v in ms[seq[i]]:
            a[seq[i]] = v
            ok = True
            for e in due[i]:
                pair = (a[e.tail], a[e.head])
                if not (pair in edges if e.is_direct else reach.reaches(*pair)):
                    ok = False
                    break
            if ok:
                extend(i + 1)

    extend(0)
    return out

"""Benchmark driver producing one CSV row per (graph, query).

Matching time covers simulation, RIG construction and ordering; the
reachability index is built once per graph and not counted.  Enumeration
time is the answer enumeration alone (count only, no tuple output).
"""
from __future__ import annotations

import csv
import logging
import os
import time
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import RigMatchError
from .graph import DataGraph, load_graph
from .mjoin import EnumLimits, mjoin
from .order import make_order
from .query import PatternQuery, parse_query, transitive_reduction
from .reach import ReachIndex
from .rig import REFINED, build_rig, rig_stats
from .simulation import PIPELINE_CAP

log = logging.getLogger(__name__)

COLUMNS = ["graph", "query", "nodes", "edges", "sim_passes", "rig_nodes", "rig_edges",
           "rig_ratio", "match_ms", "enum_ms", "matches", "completed"]


@dataclass
class BenchRow:
    graph: str
    query: str
    nodes: int
    edges: int
    sim_passes: int = 0
    rig_nodes: int = 0
    rig_edges: int = 0
    rig_ratio: float = 0.0
    match_ms: float = 0.0
    enum_ms: float = 0.0
    matches: int = 0
    completed: str = "true"

    def as_list(self):
        return [self.graph, self.query, self.nodes, self.edges, self.sim_passes,
                self.rig_nodes, self.rig_edges, f"{self.rig_ratio:.6f}",
                f"{self.match_ms:.3f}", f"{self.enum_ms:.3f}", self.matches, self.completed]


def bench_query(gname: str, g: DataGraph, ix: ReachIndex, qname: str, q: PatternQuery,
                limits: EnumLimits, mode: str = REFINED, sim: str = "auto",
                sim_cap: int | None = PIPELINE_CAP, order: str = "jo") -> BenchRow:
    row = BenchRow(gname, qname, g.num_nodes, g.num_edges)
    t0 = time.monotonic()
    rq = transitive_reduction(q)
    rig = build_rig(rq, g, ix, mode=mode, sim=sim, sim_cap=sim_cap)
    so = None if rig.is_empty else make_order(rq, rig, order)
    t1 = time.monotonic()
    rep = mjoin(rq, rig, so, limits) if so is not None else None
    t2 = time.monotonic()
    st = rig_stats(rig, g)
    row.sim_passes = rig.sim.pass_count if rig.sim is not None else 0
    row.rig_nodes, row.rig_edges, row.rig_ratio = st["nodes"], st["edges"], st["ratio"]
    row.match_ms = (t1 - t0) * 1e3
    row.enum_ms = (t2 - t1) * 1e3
    row.matches = rep.matches if rep else 0
    row.completed = "true" if (rep is None or rep.completed) else "false"
    return row


def read_workload(path: str) -> list[tuple[str, list[str]]]:
    """Workload file: one ``<graph> <query> [<query> ...]`` line per graph;
    relative paths resolve against the workload file's directory."""
    base = os.path.dirname(os.path.abspath(path))
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split("#", 1)[0].split()
            if not parts:
                continue
            paths = [p if os.path.isabs(p) else os.path.join(base, p) for p in parts]
            out.append((paths[0], paths[1:]))
    return out


def run_bench(workload: Iterable[tuple[str, list[str]]], out: TextIO,
              limits: EnumLimits | None = None, **kw) -> list[BenchRow]:
    """Write the CSV for ``(graph_path, [query_path, ...])`` pairs.  A query
    that fails is logged and recorded with ``completed=error``."""
    limits = limits or EnumLimits.bench()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    rows = []
    for gpath, qpaths in workload:
        try:
            g = load_graph(gpath)
        except (OSError, RigMatchError) as exc:
            log.error("graph %s: %s", gpath, exc)
            for qp in qpaths:
                w.writerow(BenchRow(gpath, qp, 0, 0, completed="error").as_list())
            continue
        ix = ReachIndex(g)
        for qp in qpaths:
            try:
                row = bench_query(gpath, g, ix, qp, parse_query(qp), limits, **kw)
            except (OSError, RigMatchError) as exc:
                log.error("query %s: %s", qp, exc)
                row = BenchRow(gpath, qp, g.num_nodes, g.num_edges, completed="error")
            w.writerow(row.as_list())
            out.flush()
            rows.append(row)
    return rows


def run_synthetic(out: TextIO, seed: int = 0, nodes: int = 100_000, edges: int = 500_000,
                  labels: int = 20, limits: EnumLimits | None = None, **kw) -> list[BenchRow]:
    """Generated community graph plus every template in the three edge-kind
    mixes."""
    from .generate import KIND_MIX, TEMPLATES, community_graph, template_query

    limits = limits or EnumLimits(max_matches=10 ** 5, timeout=60.0)
    rng = np.random.default_rng(seed)
    g = community_graph(rng, nodes, edges, labels)
    ix = ReachIndex(g)
    gname = f"synthetic-{nodes}-{edges}-{labels}"
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    rows = []
    for name in TEMPLATES:
        for mix, p in KIND_MIX.items():
            q = template_query(name, g.label_names, p, rng)
            row = bench_query(gname, g, ix, f"{name}-{mix}", q, limits, **kw)
            w.writerow(row.as_list())
            out.flush()
            rows.append(row)
    return rows

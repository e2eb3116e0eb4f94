"""Randomized cross-checks against the brute-force oracle.

Instance ``i`` of a run with seed ``s`` is generated from
``numpy.random.default_rng([s, i])`` alone, so any failure can be replayed
on its own.  Each instance is a random labeled graph (at most 50 nodes, up
to 4 labels, 1 to 4 edges per node) and a connected query of 3 to 6 nodes
whose reachability-edge share cycles through 0, 0.5 and 1.

Check groups:

``oracle``     engine answer equals the oracle for refined/match RIGs under
               JO, RI and a random valid order
``sim``        the three simulation drivers agree; FB within F and B
``sandwich``   oracle projections <= FB / RIG <= naive label/edge matches
``reduction``  reducing the query keeps the oracle answer
``toggles``    every optimization switch leaves the answer unchanged
"""
from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import RigMatchError
from .generate import KIND_MIX, label_names, random_graph, random_query
from .graph import DataGraph
from .mjoin import brute_force_oracle, mjoin
from .order import explicit_order, order_jo, order_ri
from .query import PatternQuery, QueryEdge, transitive_reduction
from .reach import ReachIndex
from .rig import MATCH, REFINED, build_rig
from .simulation import (SimOptions, backward_sim_only, fb_sim, fb_sim_bas, fb_sim_dag,
                         forward_sim_only)

log = logging.getLogger(__name__)

# Graphs are shrunk until the oracle's search space (product of label-match
# sizes) fits this budget, which keeps answers and oracle runs small.
SPACE_BUDGET = 200_000

GROUPS = ("oracle", "sim", "sandwich", "reduction", "toggles")

TOGGLES = {
    "cap3": dict(sim_cap=3),
    "exact": dict(sim_cap=None),
    "no-dirty": dict(sim_options=SimOptions(dirty_flags=False)),
    "no-witness": dict(sim_options=SimOptions(witness_index=False)),
    "no-batch-direct": dict(sim_options=SimOptions(batch_direct=False)),
    "no-batch-reach": dict(sim_options=SimOptions(batch_reach=False)),
    "no-dag-cut": dict(sim_options=SimOptions(dag_cut=False), early_termination=False),
    "bas": dict(sim="bas", sim_cap=None),
    "all-off": dict(sim_cap=None, early_termination=False,
                    sim_options=SimOptions(dirty_flags=False, witness_index=False,
                                           batch_direct=False, batch_reach=False,
                                           dag_cut=False)),
}


class ClosureOracle:
    """Reachability by plain BFS from every node; shares no code with the
    index."""

    def __init__(self, g: DataGraph):
        succ = [[] for _ in range(g.num_nodes)]
        for s, d in g.edges().tolist():
            succ[s].append(d)
        self.desc = []
        for u in range(g.num_nodes):
            seen = set()
            todo = deque(succ[u])
            while todo:
                v = todo.popleft()
                if v not in seen:
                    seen.add(v)
                    todo.extend(succ[v])
            self.desc.append(seen)

    def reaches(self, u: int, v: int) -> bool:
        return v in self.desc[u]


def _corrupt_reduction(q: PatternQuery) -> PatternQuery:
    # negative control: also drops the first direct edge
    r = transitive_reduction(q)
    direct = [e for e in r.edges if e.is_direct]
    if not direct:
        return r
    return r.with_edges([e for e in r.edges if e != direct[0]])


MUTATIONS: dict[str, Callable[[PatternQuery], PatternQuery]] = {
    "reduction": _corrupt_reduction,
}


@dataclass
class Instance:
    seed: int
    index: int
    graph: DataGraph
    query: PatternQuery
    shape: str
    mix: str


@dataclass
class FuzzFailure:
    seed: int
    index: int
    check: str
    detail: str

    def __str__(self):
        return (f"instance {self.index} (seed {self.seed}) failed {self.check}: {self.detail}\n"
                f"  reproduce: rigmatch fuzz --seed {self.seed} --start {self.index} --count 1")


@dataclass
class FuzzReport:
    seed: int
    instances: int = 0
    failures: list[FuzzFailure] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def make_instance(seed: int, index: int, max_nodes: int = 50, max_labels: int = 4,
                  query_nodes: tuple[int, int] = (3, 6), shape: str | None = None,
                  mix: str | None = None, budget: int = SPACE_BUDGET) -> Instance:
    rng = np.random.default_rng([seed, index])
    n = int(rng.integers(max(query_nodes[0], 5), max_nodes + 1))
    nl = int(rng.integers(1, max_labels + 1))
    density = rng.uniform(1.0, 4.0)
    acyclic = bool(rng.random() < 0.3)
    loops = bool(rng.random() < 0.2)
    mix = mix or "CHD"[index % 3]
    shape = shape or ("any", "dag", "cyclic")[int(rng.integers(0, 3))]
    k = int(rng.integers(query_nodes[0], query_nodes[1] + 1))
    q = random_query(rng, k, label_names(nl), KIND_MIX[mix], shape=shape)
    while True:
        g = random_graph(rng, n, nl, int(density * n), acyclic=acyclic, self_loops=loops)
        space = 1
        for x in q.nodes:
            space *= len(g.inverted_list(x.label))
        if space <= budget:
            return Instance(seed, index, g, q, shape, mix)
        n = max(k, int(n * 0.8))


def _answer(q, g, ix, order=None, **build) -> set[tuple]:
    rig = build_rig(q, g, ix, **build)
    if rig.is_empty:
        return set()
    out: set[tuple] = set()
    rep = mjoin(q, rig, order or order_jo(q, rig),
                batch_sink=lambda b: out.update(map(tuple, b.tolist())))
    if rep.matches != len(out):
        raise AssertionError(f"{rep.matches} emitted but {len(out)} distinct")
    return out


def _random_order(q: PatternQuery, rng: np.random.Generator):
    first = int(rng.integers(0, q.num_nodes))
    seq, placed = [first], {first}
    while len(seq) < q.num_nodes:
        frontier = sorted(set().union(*(q.neighbors(v) for v in seq)) - placed)
        v = frontier[int(rng.integers(0, len(frontier)))]
        seq.append(v)
        placed.add(v)
    return explicit_order(q, seq)


def check_instance(inst: Instance, groups=GROUPS,
                   reduce: Callable[[PatternQuery], PatternQuery] = transitive_reduction,
                   ) -> list[FuzzFailure]:
    g, q = inst.graph, inst.query
    fails: list[FuzzFailure] = []

    def fail(check, detail):
        fails.append(FuzzFailure(inst.seed, inst.index, check, detail))

    ix = ReachIndex(g)
    closure = ClosureOracle(g)
    truth = brute_force_oracle(q, g, closure)
    rq = reduce(q)

    if "reduction" in groups:
        got = brute_force_oracle(rq, g, closure)
        if got != truth:
            fail("reduction", f"{len(truth)} answers before reduction, {len(got)} after; "
                              f"query {q!r}, reduced {rq!r}")

    if "oracle" in groups:
        rng = np.random.default_rng([inst.seed, inst.index, 1])
        for mode in (REFINED, MATCH):
            rig = build_rig(rq, g, ix, mode=mode)
            orders = [] if rig.is_empty else [order_jo(rq, rig), order_ri(rq), _random_order(rq, rng)]
            for order in orders or [None]:
                got = set() if rig.is_empty else _answer(rq, g, ix, order, mode=mode)
                if got != truth:
                    fail("oracle", f"mode={mode} order={order}: {len(got)} answers, oracle {len(truth)}")

    if "sim" in groups:
        bas = fb_sim_bas(q, g, ix)
        gen = fb_sim(q, g, ix)
        if bas.sets != gen.sets:
            fail("sim", "fb_sim differs from fb_sim_bas")
        if q.is_dag() and fb_sim_dag(q, g, ix).sets != bas.sets:
            fail("sim", "fb_sim_dag differs from fb_sim_bas")
        f, b = forward_sim_only(q, g, ix), backward_sim_only(q, g, ix)
        for v in range(q.num_nodes):
            if not bas[v] <= (f[v] & b[v]):
                fail("sim", f"FB({v}) not within F and B")
        for name, opts in (("no-dirty", SimOptions(dirty_flags=False)),
                           ("no-witness", SimOptions(witness_index=False)),
                           ("no-batch", SimOptions(batch_direct=False, batch_reach=False)),
                           ("no-cut", SimOptions(dag_cut=False))):
            if fb_sim(q, g, ix, options=opts).sets != gen.sets:
                fail("sim", f"fb_sim with {name} changes the relation")

    if "sandwich" in groups:
        ms = [set(g.inverted_list(x.label)) for x in q.nodes]
        fb = fb_sim(q, g, ix)
        for v in range(q.num_nodes):
            os_v = {t[v] for t in truth}
            if not (os_v <= set(fb[v]) <= ms[v]):
                fail("sandwich", f"node {v}: os <= FB <= ms violated")
        edges = set(map(tuple, g.edges().tolist()))
        rms = [set(g.inverted_list(x.label)) for x in rq.nodes]
        for mode in (REFINED, MATCH):
            rig = build_rig(rq, g, ix, mode=mode)
            for v in range(rq.num_nodes):
                if not ({t[v] for t in truth} <= set(rig.cos[v]) <= rms[v]):
                    fail("sandwich", f"{mode} RIG node {v}: os <= cos <= ms violated")
            for ei, e in enumerate(rq.edges):
                os_e = {(t[e.tail], t[e.head]) for t in truth}
                ms_e = {(a, b) for a in rms[e.tail] for b in rms[e.head]
                        if ((a, b) in edges if e.is_direct else closure.reaches(a, b))}
                cos_e = rig.edge_pairs(ei)
                if not (os_e <= cos_e <= ms_e):
                    fail("sandwich", f"{mode} RIG edge {e}: os <= cos <= ms violated")
                if mode == MATCH and not rig.is_empty and cos_e != ms_e:
                    fail("sandwich", f"match RIG edge {e} differs from the naive match set")

    if "toggles" in groups:
        for name, kw in TOGGLES.items():
            got = _answer(rq, g, ix, **kw)
            if got != truth:
                fail("toggles", f"{name}: {len(got)} answers, oracle {len(truth)}")
    return fails


def run_fuzz(seed: int, count: int, start: int = 0, groups=GROUPS, mutate: str | None = None,
             max_nodes: int = 50, stop_on_failure: bool = False, **instance_kw) -> FuzzReport:
    reduce = MUTATIONS[mutate] if mutate else transitive_reduction
    report = FuzzReport(seed)
    t0 = time.monotonic()
    for i in range(start, start + count):
        inst = make_instance(seed, i, max_nodes=max_nodes, **instance_kw)
        try:
            fails = check_instance(inst, groups, reduce)
        except (RigMatchError, AssertionError) as exc:
            fails = [FuzzFailure(seed, i, "crash", f"{type(exc).__name__}: {exc}")]
        report.instances += 1
        if fails:
            log.warning("%s", fails[0])
            report.failures.extend(fails)
            if stop_on_failure:
                break
    report.elapsed = time.monotonic() - t0
    return report

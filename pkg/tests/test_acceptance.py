"""Acceptance criteria 1-10.

Each test prints one ``AC<n> PASS|FAIL`` line; the lines are repeated in the
terminal summary (see conftest).  Run alone with

    pytest tests/test_acceptance.py -v
"""
import logging
import time

import numpy as np
import pytest

from rigmatch.errors import OracleGuardError
from rigmatch.fuzz import check_instance, make_instance
from rigmatch.generate import KIND_MIX, TEMPLATES, community_graph, random_graph, template_query
from rigmatch.graph import load_graph
from rigmatch.mjoin import EnumLimits, brute_force_oracle, collect, mjoin
from rigmatch.order import order_jo
from rigmatch.query import QueryEdge, REACH, parse_pattern, parse_query, transitive_reduction
from rigmatch.reach import ReachIndex
from rigmatch.rig import REFINED, build_rig, rig_stats
from rigmatch.simulation import backward_sim_only, fb_sim, fb_sim_bas, fb_sim_dag, forward_sim_only

from conftest import FIG2_GRAPH, FIG2_IDS, FIG2_QUERY, names
from oracles import Closure, closure

log = logging.getLogger("acceptance")

SEED = 20240601
CORPUS = 200
RESULTS: list[str] = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"AC{n} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    return [make_instance(SEED, i) for i in range(CORPUS)]


def _run_group(corpus, group):
    t0 = time.monotonic()
    fails = []
    for inst in corpus:
        fails += check_instance(inst, (group,))
    return fails, time.monotonic() - t0


# -- 1 ---------------------------------------------------------------------

def test_ac1_table1_relations():
    g = load_graph(FIG2_GRAPH)
    q = parse_query(FIG2_QUERY)
    t0 = time.perf_counter()
    ix = ReachIndex(g)
    f, b, fb = forward_sim_only(q, g, ix), backward_sim_only(q, g, ix), fb_sim_bas(q, g, ix)
    ms = (time.perf_counter() - t0) * 1e3
    got = {"F(A)": names(g, f[0]), "B(A)": names(g, b[0]), "FB(A)": names(g, fb[0]),
           "FB(B)": names(g, fb[1]), "FB(C)": names(g, fb[2])}
    want = {"F(A)": {"a1", "a2"}, "B(A)": {"a0", "a1", "a2"}, "FB(A)": {"a1", "a2"},
            "FB(B)": {"b0", "b2"}, "FB(C)": {"c0", "c1", "c2"}}
    bad = [k for k in want if got[k] != want[k]]
    report(1, not bad and ms < 10, f"relations {'equal' if not bad else 'differ at ' + ','.join(bad)}, "
                                   f"{ms:.2f} ms incl. index build (limit 10 ms)")


# -- 2 ---------------------------------------------------------------------

def test_ac2_refined_rig_and_answer():
    g = load_graph(FIG2_GRAPH)
    q = parse_query(FIG2_QUERY)
    rig = build_rig(q, g, ReachIndex(g))
    inv = {v: k for k, v in FIG2_IDS.items()}
    rig_edges = set()
    for ei, e in enumerate(q.edges):
        rig_edges |= {(inv[g.to_external(a)], inv[g.to_external(b)]) for a, b in rig.edge_pairs(ei)}
    answer_rig = {("a1", "b0"), ("a2", "b2"), ("a1", "c0"), ("a1", "c1"), ("a2", "c0"),
                  ("a2", "c2"), ("b0", "c0"), ("b0", "c1"), ("b2", "c0"), ("b2", "c2")}
    tuples = {tuple(inv[x] for x in t) for t in collect(q, rig, order_jo(q, rig), graph=g)}
    answer = {("a1", "b0", "c0"), ("a1", "b0", "c1"), ("a2", "b2", "c0"), ("a2", "b2", "c2")}
    extra = rig_edges - answer_rig
    uses_extra = any((t[1], t[2]) == ("b2", "c1") for t in tuples)
    ok = answer_rig <= rig_edges and extra == {("b2", "c1")} and tuples == answer and not uses_extra
    report(2, ok, f"RIG = answer RIG + {sorted(extra)}, {len(tuples)} tuples, "
                  f"(b2,c1) in a tuple: {uses_extra}")


# -- 3 ---------------------------------------------------------------------

def test_ac3_oracle_equivalence(corpus):
    shapes = {
        "nodes<=50": all(i.graph.num_nodes <= 50 for i in corpus),
        "labels<=4": all(len(i.graph.label_names) <= 4 for i in corpus),
        "query 3-6": all(3 <= i.query.num_nodes <= 6 and i.query.connected for i in corpus),
        "mixes": {i.mix for i in corpus} == set(KIND_MIX),
    }
    fails, secs = _run_group(corpus, "oracle")
    ok = not fails and all(shapes.values()) and secs < 60
    detail = (f"{len(corpus)} instances x (refined, match) x (JO, RI, random order), "
              f"{len(fails)} mismatches, {secs:.1f} s (limit 60 s)")
    if fails:
        detail += f"; first: {fails[0]}"
    if not all(shapes.values()):
        detail += f"; corpus shape violated: {[k for k, v in shapes.items() if not v]}"
    report(3, ok, detail)


# -- 4 ---------------------------------------------------------------------

def test_ac4_simulation_uniqueness():
    bad = []
    for i in range(100):
        inst = make_instance(SEED + 1, i, shape="dag")
        g, q = inst.graph, inst.query
        assert q.is_dag()
        ix = ReachIndex(g)
        a, b, c = fb_sim_bas(q, g, ix), fb_sim_dag(q, g, ix), fb_sim(q, g, ix)
        if not (a.sets == b.sets == c.sets and a.exact and b.exact and c.exact):
            bad.append(("dag", i))
    for i in range(50):
        inst = make_instance(SEED + 2, i, shape="cyclic")
        g, q = inst.graph, inst.query
        assert not q.is_dag()
        ix = ReachIndex(g)
        if fb_sim_bas(q, g, ix).sets != fb_sim(q, g, ix).sets:
            bad.append(("cyclic", i))
    report(4, not bad, f"100 DAG queries (bas = dag = general), 50 cyclic (general = bas), "
                       f"{len(bad)} differences{'' if not bad else ': ' + str(bad[:5])}")


# -- 5 ---------------------------------------------------------------------

def test_ac5_sandwich(corpus):
    fails, secs = _run_group(corpus, "sandwich")
    report(5, not fails, f"os <= FB <= ms per node, os <= cos <= ms per edge on {len(corpus)} "
                         f"instances: {len(fails)} violations"
                         + (f"; first: {fails[0]}" if fails else ""))


# -- 6 ---------------------------------------------------------------------

def test_ac6_reduction_equivalence(corpus):
    example = parse_pattern("A:a -> B:b; B -> C:c; A => C")
    reduced = transitive_reduction(example)
    removed = QueryEdge(0, 2, REACH) not in reduced.edges and len(reduced.edges) == 2
    fails, _ = _run_group(corpus[:100], "reduction")
    changed = sum(transitive_reduction(i.query) != i.query for i in corpus[:100])
    report(6, removed and not fails,
           f"worked example drops (A,C): {removed}; 100 pairs, {changed} actually reduced, "
           f"{len(fails)} answer changes")


# -- 7 ---------------------------------------------------------------------

def test_ac7_reachability_exactness():
    rng = np.random.default_rng(SEED + 3)
    t0 = time.monotonic()
    wrong = pairs = cyclic_graphs = 0
    for _ in range(50):
        n = int(rng.integers(2, 201))
        g = random_graph(rng, n, 3, int(rng.uniform(1, 4) * n), acyclic=bool(rng.random() < 0.2),
                         self_loops=bool(rng.random() < 0.5))
        cyclic_graphs += not g.is_dag
        ix = ReachIndex(g)
        e = g.edges().tolist()
        desc = closure(n, e)
        for u in range(n):
            du = desc[u]
            for v in range(n):
                pairs += 1
                wrong += ix.reaches(u, v) != (v in du)
    secs = time.monotonic() - t0
    report(7, wrong == 0 and secs < 30,
           f"50 graphs ({cyclic_graphs} cyclic), {pairs} ordered pairs incl. u=u, "
           f"{wrong} wrong, {secs:.1f} s (limit 30 s)")


# -- 8 ---------------------------------------------------------------------

def test_ac8_optimization_transparency(corpus):
    fails, secs = _run_group(corpus, "toggles")
    report(8, not fails, f"cap 3 vs exact, dirty flags, witness index, batch checks, DAG cut, "
                         f"all off: {len(fails)} answer changes on {len(corpus)} instances"
                         + (f"; first: {fails[0]}" if fails else ""))


# -- 9 ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def desk_graph():
    g = community_graph(np.random.default_rng(SEED), 100_000, 500_000, 20)
    return g, ReachIndex(g)


def _desk_queries(g):
    rng = np.random.default_rng(SEED + 4)
    return [(f"{name}-{mix}", template_query(name, g.label_names, p, rng))
            for name in TEMPLATES for mix, p in KIND_MIX.items()]


@pytest.mark.slow
def test_ac9_desk_scale(desk_graph):
    g, ix = desk_graph
    limits = EnumLimits(max_matches=10 ** 5, timeout=60.0)
    crashes, timeouts, ratios = [], [], {}
    t0 = time.monotonic()
    for name, q in _desk_queries(g):
        try:
            rq = transitive_reduction(q)
            rig = build_rig(rq, g, ix, mode=REFINED)
            ratios[name] = rig_stats(rig, g)["ratio"]
            if not rig.is_empty:
                rep = mjoin(rq, rig, order_jo(rq, rig), limits)
                if rep.timed_out:
                    timeouts.append(name)
        except Exception as exc:  # noqa: BLE001 - any crash is a hard failure
            crashes.append(f"{name}: {type(exc).__name__}: {exc}")
    secs = time.monotonic() - t0
    worst = max(ratios, key=ratios.get)
    over = {k: v for k, v in ratios.items() if v >= 0.05}
    if over:
        log.warning("RIG ratio >= 5%% for %s", over)

    # capped oracle spot check on a 1K-node subsample (first 25 blocks)
    sub = g.subgraph([g.to_internal(x) for x in range(1000)])
    sub_ix, sub_cl = ReachIndex(sub), Closure(sub)
    wrong, checked, skipped = [], 0, 0
    for name, q in _desk_queries(sub):
        rq = transitive_reduction(q)
        try:
            truth = brute_force_oracle(rq, sub, sub_cl, guard=10 ** 13)
        except OracleGuardError:
            skipped += 1
            continue
        rig = build_rig(rq, sub, sub_ix)
        got = 0 if rig.is_empty else mjoin(rq, rig, order_jo(rq, rig), limits).matches
        checked += 1
        if got != min(len(truth), limits.max_matches):
            wrong.append(f"{name}: engine {got}, oracle {len(truth)}")
    ok = not crashes and not timeouts and not wrong
    detail = (f"{len(ratios)} template queries on {g.num_nodes}/{g.num_edges}/20 in {secs:.1f} s, "
              f"{len(crashes)} crashes, {len(timeouts)} timeouts; max RIG ratio "
              f"{ratios[worst]:.2%} ({worst}){' SOFT-FAIL >= 5%' if over else ' < 5%'}; "
              f"spot check {checked} queries on 1K nodes ({skipped} over guard), "
              f"{len(wrong)} count mismatches")
    if crashes or wrong:
        detail += f"; first: {(crashes or wrong)[0]}"
    report(9, ok, detail)


# -- 10 --------------------------------------------------------------------

def _limit_semantics_violations(corpus):
    bad = []
    for inst in corpus[:60]:
        g, q = inst.graph, inst.query
        truth = brute_force_oracle(q, g, Closure(g))
        rig = build_rig(q, g, ReachIndex(g))
        if rig.is_empty:
            continue
        order = order_jo(q, rig)
        total = len(truth)
        for k in sorted({0, 1, total // 2, max(total - 1, 0), total, total + 1}):
            out = []
            rep = mjoin(q, rig, order, EnumLimits(max_matches=k), sink=out.append)
            valid = len(set(out)) == len(out) and set(out) <= truth
            if not (valid and len(out) == rep.matches == min(k, total)
                    and rep.completed == (k >= total)):
                bad.append(f"instance {inst.index} k={k}: {len(out)} tuples, "
                           f"completed={rep.completed}, total {total}")
    return bad


def _timed_stop(g, ix, q):
    rq = transitive_reduction(q)
    rig = build_rig(rq, g, ix)
    order = order_jo(rq, rig)
    t0 = time.perf_counter()
    rep = mjoin(rq, rig, order, EnumLimits(timeout=0.001))
    return (time.perf_counter() - t0) * 1e3, rep


@pytest.mark.slow
def test_ac10_limit_semantics(corpus, desk_graph):
    bad = _limit_semantics_violations(corpus)
    g, ix = desk_graph
    # the template with the largest answer on this graph, uncapped
    heavy = dict(_desk_queries(g))["star5-D"]
    wall_desk, rep_desk = _timed_stop(g, ix, heavy)
    # same generator with a single label: the answer is in the billions,
    # so the timeout has to fire
    g1 = community_graph(np.random.default_rng(SEED), 100_000, 500_000, 1)
    wall_dense, rep_dense = _timed_stop(g1, ReachIndex(g1), parse_pattern("A:a => B:a; A => C:a; A => D:a"))
    ok = (not bad and wall_desk < 100 and wall_dense < 100 and rep_dense.timed_out
          and not rep_dense.completed)
    report(10, ok, f"max_matches on 60 instances x 6 caps: {len(bad)} violations"
                   + (f" ({bad[0]})" if bad else "")
                   + f"; 1 ms timeout stops in {wall_desk:.1f} ms (20 labels, "
                     f"completed={rep_desk.completed}) and {wall_dense:.1f} ms "
                     f"(1 label, timed_out={rep_dense.timed_out}, {rep_dense.matches} matches); "
                     f"limit 100 ms")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v", "-s"]))

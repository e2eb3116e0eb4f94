"""Compare the compiled and pure-Python kernel backends.

Times the set kernels on random sorted arrays and the full pipeline
(simulation, RIG build, enumeration) on a generated community graph, then
prints one line per measurement with the speed-up.

    python3 benchmarks/bench_backends.py [--nodes 100000] [--edges 500000]
"""
import argparse
import statistics
import time

import numpy as np

from rigmatch import kernels
from rigmatch.generate import community_graph, template_query
from rigmatch.mjoin import EnumLimits, mjoin
from rigmatch.order import order_jo
from rigmatch.query import transitive_reduction
from rigmatch.reach import ReachIndex
from rigmatch.rig import build_rig


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def kernel_cases(rng, size):
    a = np.unique(rng.integers(0, size * 4, size)).astype(np.uint32)
    b = np.unique(rng.integers(0, size * 4, size)).astype(np.uint32)
    rows = [np.unique(rng.integers(0, size * 4, 64)).astype(np.uint32) for _ in range(256)]
    return {
        "intersect": lambda k: k.intersect(a, b),
        "union": lambda k: k.union(a, b),
        "intersect_many": lambda k: k.intersect_many([a, b, rows[0], rows[1]]),
    }


def pipeline_case(g, ix, q):
    rq = transitive_reduction(q)

    def run(k):
        rig = build_rig(rq, g, ix)
        if not rig.is_empty:
            mjoin(rq, rig, order_jo(rq, rig), EnumLimits(max_matches=10 ** 5))
    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=100_000)
    ap.add_argument("--edges", type=int, default=500_000)
    ap.add_argument("--labels", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    if "cython" not in kernels.available():
        raise SystemExit("compiled backend not built; run: pip install -e . --no-build-isolation")
    rng = np.random.default_rng(a.seed)
    cases = kernel_cases(rng, 200_000)
    g = community_graph(rng, a.nodes, a.edges, a.labels)
    ix = ReachIndex(g)
    cand = g.inverted_list(g.label_names[0]).array
    sources = g.inverted_list(g.label_names[1]).array
    cases["tarjan_scc"] = lambda k: k.tarjan_scc(g.fwd_indptr, g.fwd_indices, g.num_nodes)
    cases["reach_filter"] = lambda k: k.reach_filter(cand, g.bwd_indptr, g.bwd_indices, sources)
    for name in ("path3", "diamond", "star5", "cycle3", "loop6", "clique4"):
        for mix, p in (("H", 0.5), ("D", 1.0)):
            cases[f"pipeline:{name}-{mix}"] = pipeline_case(g, ix, template_query(name, g.label_names, p, rng))

    print(f"{'case':<24}{'cython ms':>12}{'python ms':>12}{'speed-up':>10}")
    for name, fn in cases.items():
        res = {}
        for backend in ("cython", "python"):
            with kernels.using(backend):
                k = kernels.backend
                fn(k)  # warm caches
                res[backend] = best_of(lambda: fn(k), a.repeat)[0]
        c, p = res["cython"], res["python"]
        print(f"{name:<24}{c * 1e3:>12.3f}{p * 1e3:>12.3f}{p / c if c else float('inf'):>9.1f}x")


if __name__ == "__main__":
    main()

"""Command-line front end.

Exit status: 0 complete, 1 usage error, 2 input error, 3 a limit (match cap
or timeout) stopped enumeration early.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import RigMatchError, ValidationError
from .graph import dump_graph, load_graph, DataGraph
from .mjoin import EnumLimits, mjoin
from .order import make_order
from .query import parse_pattern, parse_query, transitive_reduction
from .reach import ReachIndex
from .rig import MATCH, REFINED, build_rig, dumps_rig, rig_stats
from .simulation import PIPELINE_CAP

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("rigmatch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    graph: str
    query: str | None = None
    pattern: str | None = None
    mode: str = REFINED
    sim: str = "auto"
    sim_cap: int | None = PIPELINE_CAP
    order: str = "jo"
    limits: EnumLimits = EnumLimits()
    output: str = "tuples"
    reduce: bool = True
    dump_sim: str | None = None
    dump_rig: str | None = None

    @classmethod
    def from_args(cls, a) -> "RunConfig":
        if (a.query is None) == (a.pattern is None):
            raise UsageError("give exactly one of QUERY or --pattern")
        cap = a.sim_cap
        if cap == "exact":
            cap = None
        else:
            try:
                cap = int(cap)
            except ValueError:
                raise UsageError(f"--sim-cap must be 'exact' or a positive integer, got {cap!r}") from None
            if cap < 1:
                raise UsageError("--sim-cap must be at least 1")
        if a.max_matches is not None and a.max_matches < 0:
            raise UsageError("--max-matches must be non-negative")
        if a.timeout is not None and a.timeout < 0:
            raise UsageError("--timeout must be non-negative")
        return cls(a.graph, a.query, a.pattern, a.mode, a.sim, cap, a.order,
                   EnumLimits(a.max_matches, a.timeout), a.output, not a.no_reduce,
                   a.dump_sim, a.dump_rig)


def _open_dump(target: str):
    return sys.stderr if target == "-" else open(target, "w", encoding="utf-8")


def cmd_query(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    g = load_graph(cfg.graph)
    q = parse_query(cfg.query) if cfg.query else parse_pattern(cfg.pattern)
    if cfg.sim == "dag" and not q.is_dag():
        raise UsageError("--sim dag needs an acyclic query")
    rq = transitive_reduction(q) if cfg.reduce else q
    t0 = time.monotonic()
    ix = ReachIndex(g)
    t1 = time.monotonic()
    rig = build_rig(rq, g, ix, mode=cfg.mode, sim=cfg.sim, sim_cap=cfg.sim_cap)
    if cfg.dump_sim and rig.sim is not None:
        fh = _open_dump(cfg.dump_sim)
        for x in rq.nodes:
            ids = sorted(g.external_set(rig.sim[x.qid]))
            fh.write(f"s {x.qid} {x.label}" + "".join(f" {v}" for v in ids) + "\n")
        if fh is not sys.stderr:
            fh.close()
    if cfg.dump_rig:
        fh = _open_dump(cfg.dump_rig)
        fh.write(dumps_rig(rig, g))
        if fh is not sys.stderr:
            fh.close()
    order = None if rig.is_empty else make_order(rq, rig, cfg.order)
    t2 = time.monotonic()

    if cfg.output == "tuples":
        out.write("\t".join(f"{x.qid}:{x.label}" for x in rq.nodes) + "\n")

        def emit(block: np.ndarray):
            out.write("".join("\t".join(map(str, t)) + "\n" for t in block.tolist()))

        rep = mjoin(rq, rig, order, cfg.limits, batch_sink=emit, graph=g) if order else None
    else:
        rep = mjoin(rq, rig, order, cfg.limits) if order else None
    t3 = time.monotonic()
    matches = rep.matches if rep else 0
    completed = rep.completed if rep else True
    if cfg.output == "stats":
        st = rig_stats(rig, g)
        out.write(f"# graph nodes={g.num_nodes} edges={g.num_edges} index_ms={(t1 - t0) * 1e3:.3f}\n")
        out.write(f"# sim passes={rig.sim.pass_count if rig.sim else 0} "
                  f"exact={str(rig.sim.exact).lower() if rig.sim else 'true'}\n")
        out.write(f"# rig nodes={st['nodes']} edges={st['edges']} ratio={st['ratio']:.6f} "
                  f"cos={','.join(map(str, st['cos_sizes']))}\n")
        out.write(f"# order={order or '-'} match_ms={(t2 - t1) * 1e3:.3f} "
                  f"enum_ms={(t3 - t2) * 1e3:.3f} backend={kernels.backend.NAME}\n")
    out.write(f"# matches={matches} completed={str(completed).lower()} "
              f"elapsed_ms={(t3 - t1) * 1e3:.3f}\n")
    return EXIT_OK if completed else EXIT_LIMIT


def cmd_fuzz(a) -> int:
    from .fuzz import GROUPS, run_fuzz

    seed = a.seed
    env = os.environ.get("RIGMATCH_SEED")
    if env:
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"RIGMATCH_SEED must be an integer, got {env!r}") from None
    groups = tuple(a.checks.split(",")) if a.checks else GROUPS
    bad = set(groups) - set(GROUPS)
    if bad:
        raise UsageError(f"unknown check group(s): {', '.join(sorted(bad))}")
    rep = run_fuzz(seed, a.count, start=a.start, groups=groups, mutate=a.mutate,
                   max_nodes=a.max_nodes, stop_on_failure=not a.keep_going)
    print(f"fuzz seed={seed} instances={rep.instances} failures={len(rep.failures)} "
          f"elapsed_s={rep.elapsed:.2f}")
    if rep.failures:
        print(rep.failures[0])
        return 1
    return EXIT_OK


def cmd_bench(a) -> int:
    from .bench import read_workload, run_bench, run_synthetic

    limits = EnumLimits(a.max_matches, a.timeout)
    out = open(a.out, "w", encoding="utf-8", newline="") if a.out else sys.stdout
    try:
        if a.synthetic:
            run_synthetic(out, seed=a.seed, nodes=a.nodes, edges=a.edges, labels=a.labels,
                          limits=limits)
        else:
            if not a.workload:
                raise UsageError("give a WORKLOAD file or --synthetic")
            run_bench(read_workload(a.workload), out, limits)
    finally:
        if a.out:
            out.close()
    return EXIT_OK


def convert_snap(edges_path: str, labels_path: str, default_label: str | None = None) -> DataGraph:
    """SNAP-style edge list (``src dst`` per line) plus ``id label`` lines.
    Ids may be sparse; they are mapped densely in ascending order."""
    labels: dict[int, str] = {}
    with open(labels_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) < 2:
                raise ValidationError(f"{labels_path}:{lineno}: expected 'id label'")
            labels[int(parts[0])] = parts[1]
    pairs = []
    with open(edges_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith(("#", "%")):
                continue
            if len(parts) < 2:
                raise ValidationError(f"{edges_path}:{lineno}: expected 'src dst'")
            pairs.append((int(parts[0]), int(parts[1])))
    ids = sorted(set(labels) | {x for p in pairs for x in p})
    pos = {x: i for i, x in enumerate(ids)}
    missing = [x for x in ids if x not in labels]
    if missing and default_label is None:
        raise ValidationError(f"{len(missing)} node(s) without a label, e.g. {missing[0]}; "
                              "use --default-label")
    names = [labels.get(x, default_label) for x in ids]
    return DataGraph.from_edges(names, [(pos[s], pos[d]) for s, d in pairs], renumber=False)


def cmd_convert(a) -> int:
    g = convert_snap(a.edges, a.labels, a.default_label)
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            dump_graph(g, fh)
    else:
        dump_graph(g, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigmatch", description="Hybrid graph pattern matching.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--backend", choices=kernels.available(),
                   help="kernel implementation (default: compiled if built)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("query", help="evaluate one query")
    q.add_argument("graph")
    q.add_argument("query", nargs="?", help="query file")
    q.add_argument("-p", "--pattern", help='inline query, e.g. "A:a -> B:b; A => C:c"')
    q.add_argument("--mode", choices=[REFINED, MATCH], default=REFINED)
    q.add_argument("--sim", choices=["bas", "dag", "auto"], default="auto")
    q.add_argument("--sim-cap", default=str(PIPELINE_CAP), help="'exact' or a pass limit")
    q.add_argument("--order", default="jo", help="jo, ri or comma-separated qids")
    q.add_argument("--max-matches", type=int)
    q.add_argument("--timeout", type=float, help="enumeration budget in seconds")
    q.add_argument("--output", choices=["tuples", "count", "stats"], default="tuples")
    q.add_argument("--no-reduce", action="store_true", help="skip transitive reduction")
    q.add_argument("--dump-sim", nargs="?", const="-", metavar="FILE",
                   help="write simulation sets (default: stderr)")
    q.add_argument("--dump-rig", nargs="?", const="-", metavar="FILE",
                   help="write the RIG (default: stderr)")

    f = sub.add_parser("fuzz", help="randomized oracle cross-checks")
    f.add_argument("--seed", type=int, default=1)
    f.add_argument("--count", type=int, default=50)
    f.add_argument("--start", type=int, default=0)
    f.add_argument("--max-nodes", type=int, default=50)
    f.add_argument("--checks", help="comma-separated check groups")
    f.add_argument("--mutate", choices=["reduction"], help="inject a known bug (negative control)")
    f.add_argument("--keep-going", action="store_true")

    b = sub.add_parser("bench", help="timing CSV")
    b.add_argument("workload", nargs="?")
    b.add_argument("--synthetic", action="store_true", help="generated graph and templates")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--nodes", type=int, default=100_000)
    b.add_argument("--edges", type=int, default=500_000)
    b.add_argument("--labels", type=int, default=20)
    b.add_argument("--max-matches", type=int, default=10 ** 7)
    b.add_argument("--timeout", type=float, default=600.0)
    b.add_argument("-o", "--out")

    c = sub.add_parser("convert", help="SNAP-style files to the graph text format")
    c.add_argument("--edges", required=True)
    c.add_argument("--labels", required=True)
    c.add_argument("--default-label")
    c.add_argument("-o", "--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(a.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if a.backend:
        kernels.use_backend(a.backend)
    try:
        if a.command == "query":
            return cmd_query(RunConfig.from_args(a))
        if a.command == "fuzz":
            return cmd_fuzz(a)
        if a.command == "bench":
            return cmd_bench(a)
        return cmd_convert(a)
    except UsageError as exc:
        print(f"rigmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, RigMatchError, ValueError) as exc:
        print(f"rigmatch: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

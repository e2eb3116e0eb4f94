"""Hybrid graph pattern matching: queries mixing direct edges and
reachability edges, evaluated by double simulation, a runtime index graph
and a multi-way join enumerator."""

from .errors import (EmptyRIGError, FormatError, GraphRangeError, OracleGuardError, ParseError,
                     PreconditionError, RigMatchError, ValidationError)
from .graph import DataGraph, dump_graph, dumps_graph, load_graph, loads_graph
from .mjoin import EnumLimits, EnumReport, brute_force_oracle, collect, count_matches, mjoin
from .nodeset import NodeSet
from .order import SearchOrder, explicit_order, make_order, order_jo, order_ri
from .query import (DIRECT, REACH, PatternQuery, QueryEdge, loads_query, parse_pattern,
                    parse_query, transitive_closure, transitive_reduction)
from .reach import ReachIndex
from .rig import MATCH, REFINED, RuntimeIndexGraph, build_rig, rig_stats
from .simulation import FBRelation, SimOptions, fb_sim, fb_sim_bas, fb_sim_dag

__version__ = "0.1.0"


def match(q: PatternQuery, g: DataGraph, limits: EnumLimits | None = None,
          mode: str = REFINED, order: str = "jo") -> list[tuple[int, ...]]:
    """All matches of ``q`` in ``g`` as tuples of external ids in qid order."""
    rq = transitive_reduction(q)
    rig = build_rig(rq, g, ReachIndex(g), mode=mode)
    if rig.is_empty:
        return []
    return collect(rq, rig, make_order(rq, rig, order), limits, graph=g)

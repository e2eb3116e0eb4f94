import os

import pytest
from hypothesis import HealthCheck, settings

from rigmatch import kernels
from rigmatch.graph import load_graph
from rigmatch.query import parse_query
from rigmatch.reach import ReachIndex

# the backend fixture only selects a module, so sharing it across generated
# inputs is safe
settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("default")

DATA = os.path.join(os.path.dirname(__file__), "data")
FIG2_GRAPH = os.path.join(DATA, "fig2_graph.txt")
FIG2_QUERY = os.path.join(DATA, "fig2_query.txt")

# external ids of the running example's nodes
FIG2_IDS = {f"a{i}": i for i in range(3)}
FIG2_IDS.update({f"b{i}": 3 + i for i in range(4)})
FIG2_IDS.update({f"c{i}": 7 + i for i in range(3)})
FIG2_NAMES = {v: k for k, v in FIG2_IDS.items()}


def names(g, nodes):
    """Internal ids -> example node names."""
    return {FIG2_NAMES[x] for x in g.external_set(nodes)}


def internal(g, *node_names):
    return g.internal_set(FIG2_IDS[n] for n in node_names)


@pytest.fixture(params=["cython", "python"])
def backend(request):
    if request.param not in kernels.available():
        pytest.skip(f"{request.param} backend not built")
    with kernels.using(request.param):
        yield kernels.backend


@pytest.fixture
def fig2():
    g = load_graph(FIG2_GRAPH)
    return g, parse_query(FIG2_QUERY), ReachIndex(g)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)

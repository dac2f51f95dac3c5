import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from dynmso.corpus import GraphGen
from dynmso.graph import MaximalGraph, SubgraphState

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, max_vertices=8):
    """Random maximal graph (any density) plus a present subset."""
    n = draw(st.integers(1, max_vertices))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 3 * n)))
    g = MaximalGraph.from_edges(n, edges)
    present = draw(st.sets(st.sampled_from(g.edges))) if g.edges else set()
    return g, SubgraphState(g, frozenset(present))


@st.composite
def sparse_graphs(draw, max_vertices=12):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    gen = GraphGen(max_vertices=max_vertices)
    g = gen.graph(rng)
    return g, gen.state(rng, g)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])

import random

import pytest
from hypothesis import given, strategies as st

from dynmso.dyckgraph import NEUTRAL, TOP, Anchor, Close, LabelVertex, Nominal, Open, swap_to_label
from dynmso.dyckreach import (LabeledDag, brute_force_delta, cfl_reach_oracle, cfl_reach_relation,
                              format_dag, init_delta, is_dyck_word, minimal_step_relation, parse_dag,
                              query_reach, random_gamma, random_swap, update_delta_swap)
from dynmso.errors import FormatError, NotAFunnelSwap, UnknownVertex

o = lambda k: Open(0, (k,))
c = lambda k: Close(0, (k,))


def test_dyck_words():
    assert is_dyck_word([])
    assert is_dyck_word([NEUTRAL, o(1), NEUTRAL, c(1)])
    assert is_dyck_word([o(1), o(2), c(2), c(1), o(3), c(3)])
    assert not is_dyck_word([o(1), c(2)])
    assert not is_dyck_word([c(1), o(1)])
    assert not is_dyck_word([o(1)])
    with pytest.raises(TypeError):
        is_dyck_word(["x"])


def test_dag_text_roundtrip_and_oracle():
    text = "d s a open p\nd a b neutral\nd b t close p\nd s u open q\nd u t close p\n"
    dag = parse_dag(text)
    assert cfl_reach_oracle(dag, "s", "t")
    assert not cfl_reach_oracle(dag, "s", "b")
    assert cfl_reach_oracle(dag, "a", "b")
    again = parse_dag(format_dag(dag))
    assert len(cfl_reach_relation(again)) == len(cfl_reach_relation(dag))
    with pytest.raises(FormatError):
        parse_dag("d s a sideways\n")
    with pytest.raises(ValueError):
        LabeledDag([], [("a", NEUTRAL, "b"), ("b", NEUTRAL, "a")]).topological_order()


@st.composite
def small_dags(draw):
    n = draw(st.integers(2, 6))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            kind = draw(st.sampled_from(["none", "none", "n", "o", "c"]))
            if kind == "n":
                edges.append((u, NEUTRAL, v))
            elif kind != "none":
                k = draw(st.integers(0, 1))
                edges.append((u, o(k) if kind == "o" else c(k), v))
    return LabeledDag(list(range(n)), edges)


@given(small_dags())
def test_cfl_closure_matches_path_enumeration(dag):
    quads = brute_force_delta(dag)
    pairs = {(x, y) for x, y, x2, y2 in quads if x2 == y2 == y}
    assert pairs == cfl_reach_relation(dag)


@given(st.integers(0, 10**6))
def test_delta_matches_brute_force(seed):
    rng = random.Random(seed)
    inst = random_gamma(rng, max_vertices=30)
    g = inst.gamma
    dag = LabeledDag.from_gamma(g)
    delta = init_delta(g)
    assert delta.tuples() == brute_force_delta(dag)
    reach = cfl_reach_relation(dag)
    assert {(x, y) for x, ys in delta.reach.items() for y in ys} == reach


@given(st.integers(0, 10**6))
def test_apply_swap_matches_recompute(seed):
    rng = random.Random(seed)
    inst = random_gamma(rng, max_vertices=40)
    g = inst.gamma
    delta = init_delta(g)
    for _ in range(8):
        j, lab = random_swap(inst, rng)
        e1, e2 = swap_to_label(g, j, lab)
        before = delta.passes
        update_delta_swap(delta, g, e1, e2)
        assert delta.passes - before == (0 if e1 == e2 else 6)
        assert delta.snapshot() == init_delta(g).snapshot()
        assert query_reach(delta, g.source, TOP) == cfl_reach_oracle(LabeledDag.from_gamma(g), g.source, TOP)


def test_contains_and_cross_tuples(rng):
    inst = random_gamma(rng, max_vertices=30)
    g = inst.gamma
    delta = init_delta(g)
    full = delta.tuples()
    verts = list(g.vertices())
    for _ in range(500):
        q = tuple(rng.choice(verts) for _ in range(4))
        assert delta.contains(*q) == (q in full)
    # an open edge followed by the neutral edge is a crossing pair
    pi = g.nominals[0][0]
    assert delta.contains(g.source, LabelVertex(0, g.current[0]),
                          LabelVertex(0, g.current[0]), Nominal(1, g.close[0, pi, g.current[0]]))


def test_minimal_steps_and_errors(rng):
    inst = random_gamma(rng, max_vertices=30)
    g = inst.gamma
    steps = minimal_step_relation(g)
    assert steps[Anchor(0)] == {LabelVertex(0, g.current[0])}
    delta = init_delta(g)
    with pytest.raises(UnknownVertex):
        delta.reaches(g.source, "nowhere")
    with pytest.raises(NotAFunnelSwap):
        delta.apply_swap((g.source, NEUTRAL, TOP), (g.source, NEUTRAL, TOP))
    other = random_gamma(rng, max_vertices=30).gamma
    with pytest.raises(ValueError):
        update_delta_swap(delta, other, other.neutral_edge(0), other.neutral_edge(0))

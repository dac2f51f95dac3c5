import random

import pytest
from hypothesis import given, strategies as st

from dynmso.automaton import LabeledTree, accepts, run
from dynmso.dyckgraph import (NEUTRAL, TOP, Anchor, Close, LabelVertex, Nominal, Open, build_gamma,
                              context_classes, dump_gamma, forward_closure, gamma_swap, swap_to_label)
from dynmso.dyckreach import LabeledDag, cfl_reach_oracle, is_dyck_word, random_gamma
from dynmso.errors import SizeBudgetExceeded, UnknownEdge
from dynmso.fixtures import GOLDEN_SETS, GOLDEN_RUN, golden_automaton, golden_tree
from dynmso.treedec import bottom_up_progression

BOTH = (0, 1)


def golden_gamma(**kw):
    t = golden_tree()
    return build_gamma(golden_automaton(), t, {n: BOTH for n in t.children}, **kw)


def source_reaches_top(g):
    return cfl_reach_oracle(LabeledDag.from_gamma(g), g.source, TOP)


def test_nominal_count_formula_unrestricted():
    g = golden_gamma(restrict_reachable=False)
    assert g.nominal_count() == sum(2 ** len(s) for s in GOLDEN_SETS) == 33
    # nominals + anchors + label vertices + top
    assert g.vertex_count() == 33 + 7 + 14 + 1
    assert len(list(g.vertices())) == g.vertex_count()


def test_restricted_is_subset_of_unrestricted(rng):
    for _ in range(30):
        inst = random_gamma(rng, max_vertices=200, restrict_reachable=False)
        r = build_gamma(inst.automaton, inst.tree, inst.label_sets, restrict_reachable=True)
        assert all(set(a) <= set(b) for a, b in zip(r.nominals, inst.gamma.nominals))
        n_states = inst.automaton.n_states
        assert inst.gamma.nominal_count() == sum(n_states ** len(s) for s in inst.gamma.prog.sets)


def test_golden_golden_path():
    g = golden_gamma()
    prog = g.prog
    # the current run, read off level by level
    for i, s in enumerate(prog.sets):
        assert Nominal(i, tuple(GOLDEN_RUN[n] for n in s)) in set(g.vertices())
    assert g.neutral_edge(0) == (Anchor(0), NEUTRAL, LabelVertex(0, 1))
    assert not source_reaches_top(g)
    assert (LabelVertex(3, 1), Close(3, (1, 1, 1)), Nominal(4, (1, 1))) in g.edge_set()
    assert all(g.out_degree(Anchor(j)) == 1 for j in range(g.n_levels))


def test_dump_spells_states():
    text = dump_gamma(golden_gamma())
    assert "A0 -.-> L0<1>\n" in text
    assert "L3<1> --3{b:q1,e:q1,f:q1}-> N4{b:q1,d:q1}\n" in text
    assert text.count("-> TOP") == 1 and "N7{a:q0} -.-> TOP\n" in text


def test_swap_moves_one_neutral_edge():
    g = golden_gamma()
    before = g.edge_set()
    e1, e2 = swap_to_label(g, 0, 0)
    assert e1 == (Anchor(0), NEUTRAL, LabelVertex(0, 1)) and e2 == (Anchor(0), NEUTRAL, LabelVertex(0, 0))
    assert before ^ g.edge_set() == {e1, e2}
    assert g.mutations == 2
    assert source_reaches_top(g)
    assert swap_to_label(g, 0, 0)[0] == swap_to_label(g, 0, 0)[1]
    assert g.mutations == 2
    with pytest.raises(UnknownEdge):
        swap_to_label(g, 0, 7)


def test_gamma_swap_needs_known_edge():
    from dynmso.dyckgraph import EdgeMaps
    with pytest.raises(UnknownEdge):
        gamma_swap(golden_gamma(), (1, 2), "ins", EdgeMaps())


def test_current_label_must_be_allowed():
    t = golden_tree()
    with pytest.raises(ValueError):
        build_gamma(golden_automaton(), t, {n: (0,) for n in t.children})


def test_size_budget():
    with pytest.raises(SizeBudgetExceeded):
        golden_gamma(max_vertices=10)
    with pytest.raises(SizeBudgetExceeded):
        golden_gamma(restrict_reachable=False, max_vertices=10)


@given(st.integers(0, 10**6), st.booleans())
def test_source_reaches_top_iff_accepted(seed, restricted):
    rng = random.Random(seed)
    inst = random_gamma(rng, max_vertices=120, restrict_reachable=restricted)
    g = inst.gamma
    for _ in range(4):
        assert source_reaches_top(g) == accepts(inst.automaton, LabeledTree(
            inst.tree.root, inst.tree.children, g.current_labels()))
        j = rng.randrange(g.n_levels)
        swap_to_label(g, j, rng.choice(g.label_sets[j]))


@given(st.integers(0, 10**6))
def test_current_path_spells_the_run(seed):
    rng = random.Random(seed)
    inst = random_gamma(rng, max_vertices=120)
    g, a = inst.gamma, inst.automaton
    rho = run(a, LabeledTree(inst.tree.root, inst.tree.children, g.current_labels()))
    out = {}
    for s, lab, d in g.edges():
        out.setdefault(s, []).append((lab, d))
    v, word = g.source, []
    for j in range(g.n_levels):
        pi = v.pi
        assert v == Nominal(j, tuple(rho[n] for n in g.prog.sets[j]))
        steps = [(Open(j, pi), Anchor(j)), (NEUTRAL, LabelVertex(j, g.current[j]))]
        for lab, d in steps:
            assert (lab, d) in out[v] if lab != NEUTRAL else g.neutral_edge(j)[2] == d
            word.append(lab)
            v = d
        nxt = [d for lab, d in out[v] if lab == Close(j, pi)]
        assert len(nxt) == 1
        word.append(Close(j, pi))
        v = nxt[0]
    assert is_dyck_word(word)
    assert (v in [Nominal(g.n_levels, pi) for pi in g.accepting]) == a.is_accepting(rho[inst.tree.root])


@given(st.integers(0, 10**6))
def test_context_classes_preserve_verdicts(seed):
    rng = random.Random(seed)
    inst = random_gamma(rng, max_vertices=150)
    a, t, sets = inst.automaton, inst.tree, inst.label_sets
    prog = bottom_up_progression(t.as_decomposition())
    canon = context_classes(a, t, sets, prog)
    reduced = build_gamma(a, t, sets, prog, canon=canon)
    plain = build_gamma(a, t, sets, prog)
    assert reduced.nominal_count() <= plain.nominal_count()
    for _ in range(6):
        j = rng.randrange(plain.n_levels)
        lab = rng.choice(plain.label_sets[j])
        swap_to_label(plain, j, lab)
        swap_to_label(reduced, j, lab)
        assert source_reaches_top(reduced) == source_reaches_top(plain)


def test_forward_closure_levels_match_progression():
    t = golden_tree()
    prog = bottom_up_progression(t.as_decomposition())
    levels, close = forward_closure(golden_automaton(), prog, t, {n: BOTH for n in t.children})
    assert len(levels) == len(prog) + 1 and levels[0] == [()]
    assert all(len(pi) == len(prog.sets[i]) for i, lv in enumerate(levels) for pi in lv)
    assert len(close) == sum(len(lv) * 2 for lv in levels[:-1])

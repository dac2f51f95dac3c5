import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dynmso.automaton import (LabeledTree, TreeAutomaton, accepts, automaton_algebra, complement,
                              determinize, format_automaton, inject, minimize, parse_automaton,
                              parse_label, pi_step, product, project, run, state_progression)
from dynmso.dyckreach import random_automaton, random_binary_tree
from dynmso.errors import (AlphabetMismatch, DomainMismatch, FormatError, IncompleteTransitions,
                           NondeterministicComplement, UnknownLabel)
from dynmso.fixtures import GOLDEN_LABELS, GOLDEN_SETS, GOLDEN_RUN, golden_decomposition, golden_automaton, golden_tree
from dynmso.treedec import bottom_up_progression


def test_golden_run():
    a, t = golden_automaton(), golden_tree()
    assert run(a, t) == GOLDEN_RUN
    assert not accepts(a, t)
    assert accepts(a, t.relabel("b", 0))


def test_golden_state_progression():
    a, t = golden_automaton(), golden_tree()
    prog = bottom_up_progression(golden_decomposition())
    seq = state_progression(a, t, prog)
    assert seq[4] == {"b": 1, "d": 1}
    assert seq == [{n: GOLDEN_RUN[n] for n in s} for s in GOLDEN_SETS]
    assert [a.names[q] for q in seq[7].values()] == ["q1"]


def test_pi_step_checks_domain():
    a, t = golden_automaton(), golden_tree()
    prog = bottom_up_progression(golden_decomposition())
    with pytest.raises(DomainMismatch):
        pi_step(a, {"b": 1}, 0, 3, prog, t)


def test_table_validation():
    with pytest.raises(IncompleteTransitions):
        TreeAutomaton(2, [0], 0, [], np.zeros((2, 2, 2)))
    with pytest.raises(IncompleteTransitions):
        TreeAutomaton(2, [0], 0, [], np.full((2, 2, 1), 5))
    with pytest.raises(UnknownLabel):
        golden_automaton().step(0, 0, 7)


def _random_tree(rng, alphabet, size):
    t = random_binary_tree(size, rng)
    return LabeledTree(t.root, t.children, {n: rng.choice(alphabet) for n in t.children})


def _trees(alphabet, rng, count=40):
    return [_random_tree(rng, alphabet, rng.randint(0, 5)) for _ in range(count)]


@given(st.integers(0, 10**6))
def test_boolean_algebra_on_random_automata(seed):
    rng = random.Random(seed)
    a = random_automaton(rng.randint(1, 4), 2, rng)
    b = random_automaton(rng.randint(1, 4), 2, rng)
    both, either, neg = product(a, b, "and"), product(a, b, "or"), complement(a)
    for t in _trees(a.alphabet, rng):
        assert accepts(both, t) == (accepts(a, t) and accepts(b, t))
        assert accepts(either, t) == (accepts(a, t) or accepts(b, t))
        assert accepts(neg, t) != accepts(a, t)


@given(st.integers(0, 10**6))
def test_minimize_preserves_language(seed):
    rng = random.Random(seed)
    a = random_automaton(rng.randint(1, 6), rng.randint(1, 3), rng)
    m = minimize(a)
    assert m.n_states <= a.n_states
    assert minimize(m).n_states == m.n_states
    for t in _trees(a.alphabet, rng):
        assert accepts(m, t) == accepts(a, t)


@given(st.integers(0, 10**6))
def test_project_then_determinize_is_existential(seed):
    rng = random.Random(seed)
    alphabet = [(x, bit) for x in range(2) for bit in range(2)]
    a = TreeAutomaton.from_function(3, alphabet, 0, [q for q in range(3) if rng.random() < 0.5],
                                    lambda *_: rng.randrange(3))
    d = automaton_algebra("project-set-bit", a, 1)
    for _ in range(25):
        t = _random_tree(rng, [(0,), (1,)], rng.randint(0, 3))
        nodes = list(t.children)
        witness = any(
            accepts(a, LabeledTree(t.root, t.children,
                                   {n: t.labels[n] + (bits[k],) for k, n in enumerate(nodes)}))
            for bits in itertools.product((0, 1), repeat=len(nodes)))
        assert accepts(d, t) == witness


def test_determinize_of_injected_is_same_language(rng):
    a = random_automaton(4, 2, rng)
    d = determinize(inject(a))
    for t in _trees(a.alphabet, rng):
        assert accepts(d, t) == accepts(a, t)


def test_algebra_errors(rng):
    a = random_automaton(2, 2, rng)
    b = random_automaton(2, 3, rng)
    with pytest.raises(AlphabetMismatch):
        product(a, b)
    with pytest.raises(NondeterministicComplement):
        complement(inject(a))
    with pytest.raises(AlphabetMismatch):
        project(a, 0)
    with pytest.raises(ValueError):
        automaton_algebra("reverse", a)


def test_format_roundtrip_with_labels():
    labels = sorted(GOLDEN_LABELS.values(), key=lambda s: s.sort_key())
    labels = list(dict.fromkeys(labels))
    a = TreeAutomaton.from_function(2, labels, 0, [1], lambda p, q, s: (p + q + len(s.C)) % 2)
    b = parse_automaton(format_automaton(a))
    assert b.alphabet == a.alphabet
    assert (b.table == a.table).all() and b.accepting == a.accepting
    assert parse_label(str(labels[0])) == labels[0]


def test_parse_automaton_errors():
    good = format_automaton(TreeAutomaton.from_function(1, [parse_label("A={} B={} C={}")], 0, [0],
                                                        lambda *_: 0))
    assert parse_automaton(good).n_states == 1
    with pytest.raises(IncompleteTransitions):
        parse_automaton(good.replace("delta 0 0 0 0\n", ""))
    with pytest.raises(FormatError):
        parse_automaton(good.replace("dta\n", ""))
    with pytest.raises(FormatError):
        parse_automaton(good + "delta 0 0 0 9\n")

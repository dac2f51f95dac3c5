"""Small hand-made instances used by golden tests, ``selftest`` and the docs.

The eight-vertex graph uses vertices ``1..8`` for ``v1..v8``; decomposition
nodes are named by letters ``a``..``g``, with ``a`` the root.
"""

from __future__ import annotations

from .automaton import LabeledTree, TreeAutomaton
from .graph import MaximalGraph, SubgraphState
from .treedec import SuccinctLabel, TreeDecomposition

GOLDEN_EDGES = (
    (8, 7), (7, 8), (5, 8), (7, 5), (7, 4), (4, 7), (4, 5), (7, 3),
    (3, 7), (6, 3), (3, 4), (5, 2), (2, 5), (1, 4), (2, 1), (1, 1),
)

GOLDEN_BAGS = {
    "a": (5, 4, 2),
    "b": (4, 2, 1),
    "c": (7, 5, 4),
    "d": (7, 4, 3),
    "e": (6, 3),
    "f": (),
    "g": (8, 7, 5),
}

GOLDEN_CHILDREN = {"a": ("b", "c"), "c": ("d", "g"), "d": ("e", "f")}

GOLDEN_COLORING = {1: 0, 2: 1, 3: 0, 4: 2, 5: 0, 6: 2, 7: 1, 8: 2}

GOLDEN_LABELS = {
    "a": SuccinctLabel.of((), (0, 1, 2), ((0, 1), (1, 0), (2, 0))),
    "b": SuccinctLabel.of((1, 2), (0,), ((0, 0), (0, 2), (1, 0))),
    "c": SuccinctLabel.of((0, 2), (1,), ((1, 0), (1, 2), (2, 1))),
    "g": SuccinctLabel.of((0, 1), (2,), ((0, 2), (1, 2), (2, 1))),
    "d": SuccinctLabel.of((1, 2), (0,), ((0, 1), (0, 2), (1, 0))),
    "e": SuccinctLabel.of((0,), (2,), ((2, 0),)),
    "f": SuccinctLabel.of(),
}

GOLDEN_POSTI = {"b": 1, "e": 2, "f": 3, "d": 4, "g": 5, "c": 6, "a": 7}

GOLDEN_SETS = [
    set(), {"b"}, {"b", "e"}, {"b", "e", "f"}, {"b", "d"},
    {"b", "d", "g"}, {"b", "c"}, {"a"},
]

GOLDEN_TREE_LABELS = {"a": 0, "b": 1, "c": 0, "d": 1, "g": 1, "e": 0, "f": 1}

GOLDEN_RUN = {"e": 0, "f": 1, "d": 1, "g": 1, "c": 1, "b": 1, "a": 1}


def golden_graph() -> MaximalGraph:
    return MaximalGraph.from_edges(8, GOLDEN_EDGES)


def golden_state() -> SubgraphState:
    return SubgraphState.full(golden_graph())


def golden_decomposition() -> TreeDecomposition:
    return TreeDecomposition.build(8, "a", GOLDEN_BAGS, GOLDEN_CHILDREN)


def golden_automaton() -> TreeAutomaton:
    """Two states, two symbols, ``delta(q_i, q_j, l_k) = q_max(i*j, k)``."""
    return TreeAutomaton.from_function(
        2, [0, 1], initial=0, accepting=[0],
        delta=lambda i, j, k: max(i * j, k), names=["q0", "q1"])


def golden_tree(labels: dict | None = None) -> LabeledTree:
    kids = {n: GOLDEN_CHILDREN.get(n, ()) for n in GOLDEN_BAGS}
    return LabeledTree("a", kids, dict(GOLDEN_TREE_LABELS if labels is None else labels))

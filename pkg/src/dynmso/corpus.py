"""Sentence corpus and random instance generators shared by tests and scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .engine import BenchReport, Engine, bench
from .graph import MaximalGraph, SubgraphState, UpdateOp
from .treedec import (BalanceConfig, TreeDecomposition, binarize, binarize_and_balance,
                      heuristic_decomposition, proper_coloring, reroot)

CONNECTIVITY = ("forallS S. (forall x. x in S) | (forall x. !(x in S)) | "
                "(exists x. exists y. x in S & !(y in S) & edge(x,y))")
SELF_LOOP = "exists x. edge(x,x)"
TWO_COLORABLE = "existsS X. forall x. forall y. edge(x,y) -> !(x in X <-> y in X)"
TAUTOLOGY = "forall x. x = x"
NO_ISOLATED = "forall x. exists y. edge(x,y) | edge(y,x)"
TWO_CYCLE = "exists x. exists y. !(x = y) & edge(x,y) & edge(y,x)"

CORPUS: tuple[str, ...] = (CONNECTIVITY, SELF_LOOP, TWO_COLORABLE, TAUTOLOGY, NO_ISOLATED, TWO_CYCLE)


@dataclass(frozen=True)
class GraphGen:
    """Random directed graphs: a random tree with a few extra edges and loops.

    Every vertex ``v > 1`` gets one edge to an earlier vertex and up to
    ``parents - 1`` more, each with probability ``extra``; each vertex gets a
    self-loop with probability ``loops``.  Orientation is uniform.
    """

    max_vertices: int = 20
    min_vertices: int = 1
    extra: float = 0.25
    loops: float = 0.15
    present: float = 0.5
    parents: int = 2

    def graph(self, rng: random.Random, n: int | None = None) -> MaximalGraph:
        if n is None:
            n = rng.randint(self.min_vertices, self.max_vertices)
        edges = set()
        for v in range(2, n + 1):
            k = 1
            for _ in range(self.parents - 1):
                if k < v - 1 and rng.random() < self.extra:
                    k += 1
            for u in rng.sample(range(1, v), k):
                edges.add((u, v) if rng.random() < 0.5 else (v, u))
        for v in range(1, n + 1):
            if rng.random() < self.loops:
                edges.add((v, v))
        return MaximalGraph.from_edges(n, sorted(edges))

    def state(self, rng: random.Random, g: MaximalGraph) -> SubgraphState:
        return SubgraphState(g, frozenset(e for e in g.edges if rng.random() < self.present))


def random_script(rng: random.Random, g: MaximalGraph, length: int) -> list[UpdateOp]:
    if not g.edges:
        return []
    return [UpdateOp(rng.choice(("ins", "del")), rng.choice(g.edges)) for _ in range(length)]


def path_with_loops(n: int, loops: int = 2, rng: random.Random | None = None) -> MaximalGraph:
    """Directed path ``1 -> 2 -> ... -> n`` plus ``loops`` self-loops spread along it."""
    rng = rng or random.Random(n)
    where = sorted(rng.sample(range(1, n + 1), min(loops, n)))
    edges = [(v, v + 1) for v in range(1, n)] + [(v, v) for v in where]
    return MaximalGraph.from_edges(n, sorted(edges))


def decomposition_variants(g: MaximalGraph, rng: random.Random, k: int = 3):
    """``k`` binary decompositions of ``g`` with colorings: balanced, rerooted at a
    random node, and colored with a random bag order."""
    d = binarize_and_balance(heuristic_decomposition(g))
    out: list[tuple[TreeDecomposition, dict]] = []
    for _ in range(k):
        b = reroot(d, rng.choice(sorted(d.bags, key=str)), rng)
        if not b.is_binary():
            b = binarize(b)
        out.append((b, proper_coloring(b, rng)))
    return out


def path_sweep(sizes=(16, 32, 64, 128), updates: int = 200, repetitions: int = 5,
               formula: str = SELF_LOOP, seed: int = 0) -> dict[int, BenchReport]:
    """Bench the same update mix on growing path graphs.

    Every size uses a force-balanced decomposition so that only the size varies;
    the heuristic alone leaves short paths unbalanced and long ones balanced.
    """
    out = {}
    for n in sizes:
        rng = random.Random(seed * 1_000_003 + n)
        g = path_with_loops(n, rng=rng)
        state = SubgraphState(g, frozenset(e for e in g.edges if rng.random() < 0.5))
        d = binarize_and_balance(heuristic_decomposition(g), BalanceConfig(force=True))
        eng = Engine.init(g, state, formula, decomposition=d)
        out[n] = bench(eng, random_script(rng, g, updates), repetitions)
    return out

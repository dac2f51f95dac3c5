"""The leveled Dyck graph whose source-to-top Dyck reachability decides
acceptance of the current label tree, plus the one-swap label update.

Level ``i`` (``1..N``) of the graph contains, for every admissible assignment
``pi`` of states to ``S_{i-1}``::

    Nominal(i-1, pi) --Open(i-1, pi)--> Anchor(i-1)
    Anchor(i-1)      --neutral-->       LabelVertex(i-1, current label of n_i)
    LabelVertex(i-1, g) --Close(i-1, pi)--> Nominal(i, step_i(pi, g))   for every label g

and ``Nominal(N, pi) --neutral--> Top`` when ``pi`` is accepting.  Only the
neutral edge out of each anchor depends on the graph; an edge update moves
exactly one of them.

Assignments ``pi`` are tuples of states aligned with ``prog.sets[i]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence

from .automaton import Automaton, LabeledTree
from .errors import SizeBudgetExceeded, UnknownEdge
from .treedec import Progression, SuccinctLabel, bottom_up_progression

DEFAULT_MAX_VERTICES = 2_000_000


@dataclass(frozen=True, slots=True)
class Nominal:
    level: int
    pi: tuple


@dataclass(frozen=True, slots=True)
class Anchor:
    level: int


@dataclass(frozen=True, slots=True)
class LabelVertex:
    level: int
    label: Hashable


@dataclass(frozen=True, slots=True)
class TopVertex:
    pass


TOP = TopVertex()
GammaVertex = Nominal | Anchor | LabelVertex | TopVertex


@dataclass(frozen=True, slots=True)
class Open:
    level: int
    pi: tuple


@dataclass(frozen=True, slots=True)
class Close:
    level: int
    pi: tuple

    def partner(self) -> Open:
        return Open(self.level, self.pi)


@dataclass(frozen=True, slots=True)
class Neutral:
    pass


NEUTRAL = Neutral()
DyckEdgeLabel = Open | Close | Neutral
GammaEdge = tuple  # (src, label, dst)


@dataclass(frozen=True)
class _Plan:
    node: Hashable
    kids: tuple[int, ...]          # positions of the children in S_{i-1}
    layout: tuple[int | None, ...]  # S_i position -> S_{i-1} position, None for n_i


def _plans(prog: Progression, tree: LabeledTree) -> list[_Plan | None]:
    plans: list[_Plan | None] = [None]
    for i in range(1, len(prog) + 1):
        n = prog.node(i)
        prev = {m: k for k, m in enumerate(prog.sets[i - 1])}
        kids = tuple(prev[m] for m in tree.children.get(n, ()))
        layout = tuple(None if m == n else prev[m] for m in prog.sets[i])
        plans.append(_Plan(n, kids, layout))
    return plans


def _local_step(a: Automaton, plan: _Plan, pi: tuple, gamma, canon=None) -> tuple:
    if plan.kids:
        q = a.step(pi[plan.kids[0]], pi[plan.kids[1]], gamma)
    else:
        q = a.step(a.initial, a.initial, gamma)
    if canon is not None:
        q = canon[plan.node][q]
    return tuple(q if p is None else pi[p] for p in plan.layout)


def context_classes(a: Automaton, tree: LabeledTree, label_sets: Mapping[Hashable, Sequence],
                    prog: Progression | None = None) -> dict:
    """Per node, map each state a run can reach there to a canonical representative.

    Two states at node ``n`` are merged when, for every labeling of the rest of
    the tree drawn from ``label_sets``, they lead to the same verdict.  This is
    a one-pass top-down refinement, so it is exact for the given tree.
    """
    order = tree.postorder()
    reach: dict = {}
    for n in order:
        kids = tree.children.get(n, ())
        if kids:
            l, r = (sorted(reach[k]) for k in kids)
            reach[n] = {a.step(q1, q2, g) for q1 in l for q2 in r for g in label_sets[n]}
        else:
            reach[n] = {a.step(a.initial, a.initial, g) for g in label_sets[n]}
    canon: dict = {}
    cls: dict = {}

    def assign(n, keys: dict) -> None:
        reps: dict = {}
        for q in sorted(keys):
            reps.setdefault(keys[q], q)
        canon[n] = {q: reps[keys[q]] for q in keys}
        ids = {k: i for i, k in enumerate(dict.fromkeys(keys[q] for q in sorted(keys)))}
        cls[n] = {q: ids[keys[q]] for q in keys}

    assign(tree.root, {q: a.is_accepting(q) for q in reach[tree.root]})
    for n in reversed(order):
        kids = tree.children.get(n, ())
        if not kids:
            continue
        l, r = kids
        labels = label_sets[n]
        sib_r, sib_l = sorted(reach[r]), sorted(reach[l])
        assign(l, {q: tuple(cls[n][a.step(q, s, g)] for s in sib_r for g in labels)
                   for q in reach[l]})
        assign(r, {q: tuple(cls[n][a.step(s, q, g)] for s in sib_l for g in labels)
                   for q in reach[r]})
    return canon


def forward_closure(a: Automaton, prog: Progression, tree: LabeledTree,
                    label_sets: Mapping[Hashable, Sequence],
                    max_vertices: int = DEFAULT_MAX_VERTICES,
                    canon: Mapping | None = None) -> tuple[list[list[tuple]], dict]:
    """Admissible assignments per level and the close-target table.

    Returns ``(R, close)`` with ``R[i]`` the assignments over ``S_i`` reachable
    from the empty one under any choice of labels, and
    ``close[(i-1, pi, g)]`` the assignment at level ``i``.
    """
    plans = _plans(prog, tree)
    levels: list[list[tuple]] = [[()]]
    close: dict = {}
    total = 1
    for i in range(1, len(prog) + 1):
        plan = plans[i]
        seen: dict[tuple, None] = {}
        for pi in levels[i - 1]:
            for g in label_sets[plan.node]:
                t = _local_step(a, plan, pi, g, canon)
                close[i - 1, pi, g] = t
                seen.setdefault(t)
        total += len(seen)
        if total > max_vertices:
            raise SizeBudgetExceeded(f"more than {max_vertices} nominal vertices")
        levels.append(list(seen))
    return levels, close


def _all_assignments(a, prog: Progression, tree: LabeledTree, label_sets, max_vertices: int):
    n_states = getattr(a, "n_states", None)
    if n_states is None or not hasattr(a, "table"):
        raise ValueError("the unrestricted construction needs an explicit automaton")
    total = sum(n_states ** len(s) for s in prog.sets)
    if total > max_vertices:
        raise SizeBudgetExceeded(f"{total} nominal vertices exceed the cap of {max_vertices}")
    plans = _plans(prog, tree)
    levels = [list(itertools.product(range(n_states), repeat=len(s))) for s in prog.sets]
    close = {}
    for i in range(1, len(prog) + 1):
        for pi in levels[i - 1]:
            for g in label_sets[plans[i].node]:
                close[i - 1, pi, g] = _local_step(a, plans[i], pi, g)
    return levels, close


class GammaGraph:
    """Mutable only through :func:`gamma_swap`."""

    def __init__(self, automaton: Automaton, tree: LabeledTree, prog: Progression,
                 label_sets: Sequence[tuple], current: list, nominals: list[list[tuple]],
                 close: dict, restricted: bool) -> None:
        self.automaton = automaton
        self.tree = tree
        self.prog = prog
        self.n_levels = len(prog)
        self.label_sets = label_sets          # by level j = i-1
        self.current = current                # by level j
        self.nominals = nominals              # by level 0..N
        self.nominal_index = [set(level) for level in nominals]
        self.close = close
        self.restricted = restricted
        self.accepting = frozenset(
            pi for pi in nominals[-1] if pi and automaton.is_accepting(pi[0]))
        self.mutations = 0

    # -- vertices
    @property
    def source(self) -> Nominal:
        return Nominal(0, ())

    def nominal_count(self) -> int:
        return sum(len(level) for level in self.nominals)

    def vertices(self) -> Iterator:
        for i, level in enumerate(self.nominals):
            for pi in level:
                yield Nominal(i, pi)
        for j in range(self.n_levels):
            yield Anchor(j)
            for g in self.label_sets[j]:
                yield LabelVertex(j, g)
        yield TOP

    def vertex_count(self) -> int:
        return (self.nominal_count() + self.n_levels
                + sum(len(s) for s in self.label_sets) + 1)

    def has_vertex(self, v) -> bool:
        if isinstance(v, Nominal):
            return 0 <= v.level <= self.n_levels and v.pi in self.nominal_index[v.level]
        if isinstance(v, Anchor):
            return 0 <= v.level < self.n_levels
        if isinstance(v, LabelVertex):
            return 0 <= v.level < self.n_levels and v.label in self.label_sets[v.level]
        return v == TOP

    # -- edges
    def neutral_edge(self, j: int) -> GammaEdge:
        return (Anchor(j), NEUTRAL, LabelVertex(j, self.current[j]))

    def edges(self) -> Iterator[GammaEdge]:
        for j in range(self.n_levels):
            for pi in self.nominals[j]:
                yield (Nominal(j, pi), Open(j, pi), Anchor(j))
            yield self.neutral_edge(j)
            for g in self.label_sets[j]:
                for pi in self.nominals[j]:
                    yield (LabelVertex(j, g), Close(j, pi), Nominal(j + 1, self.close[j, pi, g]))
        for pi in sorted(self.accepting):
            yield (Nominal(self.n_levels, pi), NEUTRAL, TOP)

    def out_degree(self, v) -> int:
        if isinstance(v, Anchor):
            return 1
        return sum(1 for e in self.edges() if e[0] == v)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def current_labels(self) -> dict:
        return {self.prog.node(j + 1): self.current[j] for j in range(self.n_levels)}


def build_gamma(a: Automaton, tree: LabeledTree, label_sets: Mapping[Hashable, Sequence],
                prog: Progression | None = None, restrict_reachable: bool = True,
                max_vertices: int = DEFAULT_MAX_VERTICES, canon: Mapping | None = None) -> GammaGraph:
    """Build the graph for ``tree``'s current labels; ``label_sets[n]`` lists every
    label node ``n`` may carry (it must contain the current one).

    ``canon`` (from :func:`context_classes`) merges equivalent states in
    restricted mode.
    """
    if prog is None:
        prog = bottom_up_progression(tree.as_decomposition())
    sets = []
    for j in range(len(prog)):
        n = prog.node(j + 1)
        labels = tuple(dict.fromkeys(label_sets[n]))
        if tree.labels[n] not in labels:
            raise ValueError(f"current label of node {n!r} is not among its allowed labels")
        sets.append(labels)
    by_node = {prog.node(j + 1): sets[j] for j in range(len(prog))}
    if restrict_reachable:
        nominals, close = forward_closure(a, prog, tree, by_node, max_vertices, canon)
    else:
        nominals, close = _all_assignments(a, prog, tree, by_node, max_vertices)
    current = [tree.labels[prog.node(j + 1)] for j in range(len(prog))]
    return GammaGraph(a, tree, prog, sets, current, nominals, close, restrict_reachable)


def label_edit(gamma: SuccinctLabel, e: tuple[int, int], chi: Mapping[int, int],
               kind: str) -> SuccinctLabel:
    pair = (chi[e[0]], chi[e[1]])
    if kind in ("add", "ins"):
        C = gamma.C | {pair}
    elif kind == "del":
        C = gamma.C - {pair}
    else:
        raise ValueError(f"unknown edit kind {kind!r}")
    return SuccinctLabel(gamma.A, gamma.B, frozenset(C))


@dataclass
class EdgeMaps:
    """Precomputed ``e -> level`` and ``(e, label, kind) -> edited label``."""

    level: dict = field(default_factory=dict)
    edit: dict = field(default_factory=dict)

    @classmethod
    def build(cls, g: GammaGraph, edges, intro_levels: Mapping, chi: Mapping[int, int]) -> "EdgeMaps":
        maps = cls()
        for e in edges:
            j = intro_levels[e] - 1
            maps.level[e] = j
            for gamma in g.label_sets[j]:
                for kind in ("ins", "del"):
                    maps.edit[e, gamma, kind] = label_edit(gamma, e, chi, kind)
        return maps


def gamma_swap(g: GammaGraph, e: tuple[int, int], kind: str, maps: EdgeMaps) -> tuple[GammaEdge, GammaEdge]:
    """Move the neutral edge out of the anchor at ``e``'s level; returns (deleted, inserted)."""
    if e not in maps.level:
        raise UnknownEdge(f"edge {e} is not in the maximal graph")
    j = maps.level[e]
    old = g.current[j]
    new = maps.edit[e, old, kind]
    e1 = g.neutral_edge(j)
    if new != old:
        g.current[j] = new
        g.mutations += 2
    return e1, g.neutral_edge(j)


def swap_to_label(g: GammaGraph, j: int, label: Hashable) -> tuple[GammaEdge, GammaEdge]:
    """Point anchor ``j`` at ``label`` directly, bypassing the edge maps."""
    if label not in g.label_sets[j]:
        raise UnknownEdge(f"level {j} has no label vertex for {label!r}")
    e1 = g.neutral_edge(j)
    if g.current[j] != label:
        g.current[j] = label
        g.mutations += 2
    return e1, g.neutral_edge(j)


# ---------------------------------------------------------------------------
# debug dump


def _spell_pi(g: GammaGraph, level: int, pi: tuple) -> str:
    names = getattr(g.automaton, "names", None)
    parts = []
    for n, q in zip(g.prog.sets[level], pi):
        parts.append(f"{n}:{names[q] if names else q}")
    return "{" + ",".join(parts) + "}"


def spell_vertex(g: GammaGraph, v) -> str:
    if isinstance(v, Nominal):
        return f"N{v.level}{_spell_pi(g, v.level, v.pi)}"
    if isinstance(v, Anchor):
        return f"A{v.level}"
    if isinstance(v, LabelVertex):
        return f"L{v.level}<{v.label}>"
    return "TOP"


def spell_label(g: GammaGraph, lab) -> str:
    if isinstance(lab, Open):
        return f"+{lab.level}{_spell_pi(g, lab.level, lab.pi)}"
    if isinstance(lab, Close):
        return f"-{lab.level}{_spell_pi(g, lab.level, lab.pi)}"
    return "."


def dump_gamma(g: GammaGraph) -> str:
    lines = sorted(f"{spell_vertex(g, s)} -{spell_label(g, l)}-> {spell_vertex(g, d)}"
                   for s, l, d in g.edges())
    return "\n".join(lines) + "\n"

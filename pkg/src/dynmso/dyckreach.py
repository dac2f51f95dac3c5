"""Dyck words, a general CFL-reachability oracle, and the 4-ary relation

    Delta(x1, y1, x2, y2)  iff  paths x1 ~> y1 and x2 ~> y2 (possibly empty)
                                exist whose concatenated labels form a Dyck word

maintained on leveled Dyck graphs under neutral-edge swaps.

Delta is stored factored into two side relations:

* ``reach``: binary Dyck reachability (reflexive), with its inverse;
* ``cross``: tuples ``(z1, y1, x2, z2)`` where ``z1 ~> y1`` is a single open
  edge, optionally followed by the anchor's neutral edge, and ``x2 ~> z2``
  ends with the matching close edge, optionally preceded by that neutral edge.

so that ``Delta = reach x reach  u  {(x1,y1,x2,y2) | (z1,y1,x2,z2) in cross,
reach(x1,z1), reach(z2,y2)}``.  In a leveled graph an unmatched open can only
be followed by the neutral edge of its anchor, so every other tuple shape is
impossible; :func:`brute_force_delta` checks this claim on small instances.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Sequence

from .automaton import LabeledTree, TreeAutomaton
from .dyckgraph import (NEUTRAL, TOP, Anchor, Close, GammaGraph, LabelVertex, Neutral, Nominal,
                        Open, build_gamma, swap_to_label)
from .errors import FormatError, NotAFunnelSwap, NotFunnelShaped, UnknownVertex

# ---------------------------------------------------------------------------
# words and generic graphs


def is_dyck_word(seq: Iterable) -> bool:
    stack = []
    for lab in seq:
        if isinstance(lab, Neutral):
            continue
        if isinstance(lab, Open):
            stack.append(lab)
        elif isinstance(lab, Close):
            if not stack or stack.pop() != lab.partner():
                return False
        else:
            raise TypeError(f"not a Dyck edge label: {lab!r}")
    return not stack


@dataclass
class LabeledDag:
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # (src, label, dst)

    def __post_init__(self) -> None:
        known = set(self.vertices)
        for s, _, d in self.edges:
            for v in (s, d):
                if v not in known:
                    known.add(v)
                    self.vertices.append(v)

    def out_edges(self) -> dict:
        out = defaultdict(list)
        for s, lab, d in self.edges:
            out[s].append((lab, d))
        return out

    def topological_order(self) -> list:
        out = self.out_edges()
        indeg = {v: 0 for v in self.vertices}
        for _, _, d in self.edges:
            indeg[d] += 1
        order = [v for v in self.vertices if indeg[v] == 0]
        k = 0
        while k < len(order):
            for _, d in out.get(order[k], ()):
                indeg[d] -= 1
                if indeg[d] == 0:
                    order.append(d)
            k += 1
        if len(order) != len(self.vertices):
            raise ValueError("graph has a cycle")
        return order

    @classmethod
    def from_gamma(cls, g: GammaGraph) -> "LabeledDag":
        return cls(list(g.vertices()), list(g.edges()))


def parse_dag(text: str) -> LabeledDag:
    """Lines ``d src dst open|close id`` or ``d src dst neutral``."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "d" or len(tok) not in (4, 5):
            raise FormatError(f"unrecognised line {line!r}", lineno)
        _, s, d, kind, *rest = tok
        if kind == "neutral" and not rest:
            lab = NEUTRAL
        elif kind in ("open", "close") and len(rest) == 1:
            lab = (Open if kind == "open" else Close)(0, (rest[0],))
        else:
            raise FormatError(f"bad edge label in {line!r}", lineno)
        edges.append((s, lab, d))
    return LabeledDag([], edges)


def format_dag(dag: LabeledDag) -> str:
    ids: dict = {}
    lines = []

    def name(v) -> str:
        return ids.setdefault(v, str(len(ids)))

    for s, lab, d in dag.edges:
        if isinstance(lab, Neutral):
            lines.append(f"d {name(s)} {name(d)} neutral")
        else:
            pair = ids.setdefault(("pair", lab.level, lab.pi), f"p{len(ids)}")
            kind = "open" if isinstance(lab, Open) else "close"
            lines.append(f"d {name(s)} {name(d)} {kind} {pair}")
    return "\n".join(lines) + "\n"


def cfl_reach_relation(dag: LabeledDag) -> set[tuple]:
    """All Dyck-reachable pairs, by worklist closure over D -> e | . | D D | o D c."""
    opens_into = defaultdict(list)   # v -> [(a, pair)] for edges a -o-> v
    closes_from = defaultdict(list)  # v -> [(b, pair)] for edges v -c-> b
    rel: set[tuple] = set()
    fwd = defaultdict(set)
    bwd = defaultdict(set)
    work = []

    def add(u, v) -> None:
        if (u, v) not in rel:
            rel.add((u, v))
            fwd[u].add(v)
            bwd[v].add(u)
            work.append((u, v))

    for v in dag.vertices:
        add(v, v)
    for s, lab, d in dag.edges:
        if isinstance(lab, Neutral):
            add(s, d)
        elif isinstance(lab, Open):
            opens_into[d].append((s, lab))
        else:
            closes_from[s].append((d, lab.partner()))
    while work:
        u, v = work.pop()
        for w in list(fwd[v]):
            add(u, w)
        for t in list(bwd[u]):
            add(t, v)
        for a, o in opens_into[u]:
            for b, o2 in closes_from[v]:
                if o == o2:
                    add(a, b)
    return rel


def cfl_reach_oracle(dag: LabeledDag, x, y) -> bool:
    return (x, y) in cfl_reach_relation(dag)


def _paths_from(dag: LabeledDag, limit: int) -> dict:
    """Every path (including the empty one) from each vertex, as (end, labels)."""
    out = dag.out_edges()
    memo: dict = {}
    count = 0
    for v in reversed(dag.topological_order()):
        ps = [(v, ())]
        for lab, d in out.get(v, ()):
            ps.extend((end, (lab,) + word) for end, word in memo[d])
        count += len(ps)
        if count > limit:
            raise ValueError("too many paths to enumerate")
        memo[v] = ps
    return memo


def _reduced(word: tuple):
    """Bracket normal form ``(unmatched closes, unmatched opens)``, or None on a mismatch."""
    closes, stack = [], []
    for lab in word:
        if isinstance(lab, Open):
            stack.append(lab)
        elif isinstance(lab, Close):
            if stack:
                if stack.pop() != lab.partner():
                    return None
            else:
                closes.append(lab)
    return tuple(closes), tuple(stack)


def brute_force_delta(dag: LabeledDag, limit: int = 20_000) -> set[tuple]:
    """Delta by enumerating every pair of paths and testing the concatenation.

    Paths are grouped by reduced bracket form; ``is_dyck_word`` is evaluated on
    one representative word pair per pair of groups.
    """
    paths = _paths_from(dag, limit)
    groups: dict = defaultdict(lambda: [None, set()])
    for x, ps in paths.items():
        for y, w in ps:
            r = _reduced(w)
            if r is None:
                continue
            slot = groups[r]
            slot[0] = w if slot[0] is None else slot[0]
            slot[1].add((x, y))
    out = set()
    items = list(groups.values())
    for w1, ends1 in items:
        for w2, ends2 in items:
            if is_dyck_word(w1 + w2):
                for x1, y1 in ends1:
                    for x2, y2 in ends2:
                        out.add((x1, y1, x2, y2))
    return out


# ---------------------------------------------------------------------------
# leveled graphs


def _check_funnel(g: GammaGraph) -> None:
    if len(g.current) != g.n_levels:
        raise NotFunnelShaped("some anchor has no outgoing neutral edge")
    for j, lab in enumerate(g.current):
        if lab not in g.label_sets[j]:
            raise NotFunnelShaped(f"anchor {j} points at an unknown label vertex")


def minimal_step_relation(g: GammaGraph) -> dict:
    """Successor map of minimal non-empty Dyck paths."""
    _check_funnel(g)
    rel: dict = defaultdict(set)
    for j in range(g.n_levels):
        rel[Anchor(j)].add(LabelVertex(j, g.current[j]))
        for pi in g.nominals[j]:
            rel[Nominal(j, pi)].add(Nominal(j + 1, g.close[j, pi, g.current[j]]))
    for pi in g.accepting:
        rel[Nominal(g.n_levels, pi)].add(TOP)
    return dict(rel)


class DeltaRelation:
    """Delta for one leveled graph; kept current by :meth:`apply_swap`."""

    def __init__(self, g: GammaGraph) -> None:
        _check_funnel(g)
        self.g = g
        self.reach: dict = {}
        self.reach_inv: dict = defaultdict(set)
        self.cross: dict = defaultdict(set)   # (y1, x2) -> {(z1, z2)}
        self.cross_by_level: dict = defaultdict(set)  # level -> {(z1, y1, x2, z2)}
        self.passes = 0
        self.last_passes = 0
        self._init_reach()
        for j in range(g.n_levels):
            self._add_cross(j)

    # -- construction
    def _init_reach(self) -> None:
        g = self.g
        top = {TOP}
        self.reach[TOP] = top
        for pi in g.nominals[g.n_levels]:
            v = Nominal(g.n_levels, pi)
            self.reach[v] = {v, TOP} if pi in g.accepting else {v}
        for j in range(g.n_levels - 1, -1, -1):
            cur = g.current[j]
            a = Anchor(j)
            self.reach[a] = {a, LabelVertex(j, cur)}
            for lab in g.label_sets[j]:
                lv = LabelVertex(j, lab)
                self.reach[lv] = {lv}
            for pi in g.nominals[j]:
                v = Nominal(j, pi)
                r = set(self.reach[Nominal(j + 1, g.close[j, pi, cur])])
                r.add(v)
                self.reach[v] = r
        for x, ys in self.reach.items():
            for y in ys:
                self.reach_inv[y].add(x)

    def _cross_tuples(self, j: int) -> Iterator[tuple]:
        g = self.g
        cur = g.current[j]
        anchor, cur_v = Anchor(j), LabelVertex(j, cur)
        for pi in g.nominals[j]:
            z1 = Nominal(j, pi)
            for y1 in (anchor, cur_v):
                for lab in g.label_sets[j]:
                    yield (z1, y1, LabelVertex(j, lab), Nominal(j + 1, g.close[j, pi, lab]))
                yield (z1, y1, anchor, Nominal(j + 1, g.close[j, pi, cur]))

    def _add_cross(self, j: int) -> None:
        for t in self._cross_tuples(j):
            self.cross_by_level[j].add(t)
            self.cross[t[1], t[2]].add((t[0], t[3]))

    def _drop_cross(self, j: int) -> None:
        for t in self.cross_by_level.pop(j, ()):
            bucket = self.cross[t[1], t[2]]
            bucket.discard((t[0], t[3]))
            if not bucket:
                del self.cross[t[1], t[2]]

    # -- queries
    def _known(self, v) -> None:
        if v not in self.reach:
            raise UnknownVertex(f"{v!r} is not a vertex of the graph")

    def reaches(self, x, y) -> bool:
        self._known(x)
        self._known(y)
        return y in self.reach[x]

    def contains(self, x1, y1, x2, y2) -> bool:
        for v in (x1, y1, x2, y2):
            self._known(v)
        if y1 in self.reach[x1] and y2 in self.reach[x2]:
            return True
        for z1, z2 in self.cross.get((y1, x2), ()):
            if z1 in self.reach[x1] and y2 in self.reach[z2]:
                return True
        return False

    def tuples(self) -> set[tuple]:
        """The full relation; quadratic in the number of reach pairs."""
        pairs = [(x, y) for x, ys in self.reach.items() for y in ys]
        out = {(x1, y1, x2, y2) for x1, y1 in pairs for x2, y2 in pairs}
        for (y1, x2), zs in self.cross.items():
            for z1, z2 in zs:
                for x1 in self.reach_inv[z1]:
                    for y2 in self.reach[z2]:
                        out.add((x1, y1, x2, y2))
        return out

    def support_size(self) -> int:
        return sum(len(ys) for ys in self.reach.values()) + sum(len(v) for v in self.cross_by_level.values())

    def snapshot(self) -> tuple:
        return ({x: frozenset(ys) for x, ys in self.reach.items()},
                {j: frozenset(ts) for j, ts in self.cross_by_level.items() if ts})

    # -- update
    def _pass(self) -> None:
        self.passes += 1
        self.last_passes += 1

    def apply_swap(self, e1: tuple, e2: tuple) -> None:
        """Bring the relation up to date after ``g``'s neutral edge ``e1`` became ``e2``.

        The graph must already carry ``e2``.  Every step is a select, join or
        projection over the stored relations; none loops over levels.
        """
        self.last_passes = 0
        (a1, l1, t1), (a2, l2, t2) = e1, e2
        if not (isinstance(a1, Anchor) and a1 == a2 and l1 == NEUTRAL and l2 == NEUTRAL):
            raise NotAFunnelSwap("swapped edges must be neutral edges out of one anchor")
        if e1 == e2:
            return
        g = self.g
        j = a1.level
        old, new = t1.label, t2.label
        # 1. assignments whose successor moves
        self._pass()
        moved = [(Nominal(j, pi), Nominal(j + 1, g.close[j, pi, old]), Nominal(j + 1, g.close[j, pi, new]))
                 for pi in g.nominals[j] if g.close[j, pi, old] != g.close[j, pi, new]]
        below = {z: set(self.reach_inv[z]) for z, _, _ in moved}
        # 2. retract below(z) x reach(old successor)
        self._pass()
        for z, s_old, _ in moved:
            for y in self.reach[s_old]:
                inv = self.reach_inv[y]
                for x in below[z]:
                    self.reach[x].discard(y)
                    inv.discard(x)
        # 3. assert below(z) x reach(new successor)
        self._pass()
        for z, _, s_new in moved:
            for y in self.reach[s_new]:
                inv = self.reach_inv[y]
                for x in below[z]:
                    self.reach[x].add(y)
                    inv.add(x)
        # 4. the anchor's own reach set
        self._pass()
        self.reach[a1].discard(t1)
        self.reach_inv[t1].discard(a1)
        self.reach[a1].add(t2)
        self.reach_inv[t2].add(a1)
        # 5-6. crossing tuples of this level
        self._pass()
        self._drop_cross(j)
        self._pass()
        self._add_cross(j)


def init_delta(g: GammaGraph) -> DeltaRelation:
    return DeltaRelation(g)


def update_delta_swap(delta: DeltaRelation, g: GammaGraph, e1: tuple, e2: tuple) -> DeltaRelation:
    if delta.g is not g:
        raise ValueError("relation belongs to a different graph")
    delta.apply_swap(e1, e2)
    return delta


def query_reach(delta: DeltaRelation, x, y) -> bool:
    return delta.contains(x, y, y, y)


# ---------------------------------------------------------------------------
# random instances


def random_binary_tree(n_internal: int, rng: random.Random) -> LabeledTree:
    children: dict = {0: ()}
    leaves = [0]
    nxt = 1
    for _ in range(n_internal):
        leaf = leaves.pop(rng.randrange(len(leaves)))
        children[leaf] = (nxt, nxt + 1)
        children[nxt] = children[nxt + 1] = ()
        leaves += [nxt, nxt + 1]
        nxt += 2
    return LabeledTree(0, children, {n: None for n in children})


def random_automaton(n_states: int, n_symbols: int, rng: random.Random) -> TreeAutomaton:
    return TreeAutomaton.from_function(
        n_states, list(range(n_symbols)), 0,
        [q for q in range(n_states) if rng.random() < 0.5],
        lambda *_: rng.randrange(n_states))


@dataclass
class RandomInstance:
    automaton: TreeAutomaton
    tree: LabeledTree
    label_sets: dict
    gamma: GammaGraph


def random_gamma(rng: random.Random, max_vertices: int = 40, restrict_reachable: bool = True,
                 tries: int = 200) -> RandomInstance:
    """A small random leveled graph; the vertex count stays within ``max_vertices``."""
    for _ in range(tries):
        a = random_automaton(rng.randint(1, 3), rng.randint(1, 3), rng)
        tree = random_binary_tree(rng.randint(0, 3), rng)
        sets = {n: tuple(sorted(rng.sample(range(len(a.alphabet)), rng.randint(1, len(a.alphabet)))))
                for n in tree.children}
        tree = LabeledTree(tree.root, tree.children, {n: rng.choice(s) for n, s in sets.items()})
        g = build_gamma(a, tree, sets, restrict_reachable=restrict_reachable)
        if g.vertex_count() <= max_vertices:
            return RandomInstance(a, tree, sets, g)
    raise RuntimeError("could not draw a small enough instance")


def random_swap(inst: RandomInstance, rng: random.Random) -> tuple[int, Hashable]:
    """A level and a target label for its anchor (may equal the current one)."""
    g = inst.gamma
    j = rng.randrange(g.n_levels)
    return j, rng.choice(g.label_sets[j])

"""Tree decompositions: construction, validation, binarization, balancing,
proper colorings, succinct labels and bottom-up progressions.

Height is counted in nodes: a single-node tree has height 1.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .errors import FormatError, LabelBudgetExceeded, NoContainingBag, WidthCapExceeded
from .graph import Edge, MaximalGraph, SubgraphState

Node = Hashable


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    """Rooted ordered tree of bags over vertices ``1..vertex_count``."""

    vertex_count: int
    root: Node
    bags: Mapping[Node, frozenset[int]]
    children: Mapping[Node, tuple[Node, ...]]
    parent: Mapping[Node, Node | None] = field(init=False)

    def __post_init__(self) -> None:
        parent: dict[Node, Node | None] = {self.root: None}
        for n, kids in self.children.items():
            for k in kids:
                parent[k] = n
        object.__setattr__(self, "parent", parent)

    @classmethod
    def build(cls, vertex_count: int, root: Node, bags: Mapping[Node, Iterable[int]],
              children: Mapping[Node, Sequence[Node]]) -> "TreeDecomposition":
        fbags = {n: frozenset(b) for n, b in bags.items()}
        kids = {n: tuple(children.get(n, ())) for n in fbags}
        return cls(vertex_count, root, fbags, kids)

    def preorder(self) -> list[Node]:
        out, stack = [], [self.root]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(self.children.get(n, ())))
        return out

    def __len__(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def height(self) -> int:
        depth = {self.root: 1}
        for n in self.preorder():
            for k in self.children.get(n, ()):
                depth[k] = depth[n] + 1
        return max(depth.values())

    def is_binary(self) -> bool:
        return all(len(self.children.get(n, ())) in (0, 2) for n in self.bags)

    def is_leaf(self, n: Node) -> bool:
        return not self.children.get(n)

    def shared_with_parent(self, n: Node) -> frozenset[int]:
        p = self.parent[n]
        return frozenset() if p is None else self.bags[n] & self.bags[p]

    def relabelled(self) -> "TreeDecomposition":
        """Same tree with nodes renamed ``0..N-1`` in preorder."""
        order = self.preorder()
        ren = {n: i for i, n in enumerate(order)}
        return TreeDecomposition.build(
            self.vertex_count, 0,
            {ren[n]: self.bags[n] for n in order},
            {ren[n]: [ren[k] for k in self.children.get(n, ())] for n in order},
        )


# ---------------------------------------------------------------------------
# validation


def _structure_violations(d: TreeDecomposition) -> list[str]:
    errors = []
    seen: set[Node] = set()
    stack = [d.root]
    while stack:
        n = stack.pop()
        if n in seen:
            errors.append(f"tree: node {n!r} reached twice (not a tree)")
            return errors
        seen.add(n)
        for k in d.children.get(n, ()):
            if k not in d.bags:
                errors.append(f"tree: child {k!r} of {n!r} has no bag")
            else:
                stack.append(k)
    missing = set(d.bags) - seen
    if missing:
        errors.append(f"tree: nodes unreachable from root: {sorted(map(str, missing))}")
    return errors


def decomposition_violations(g: MaximalGraph, d: TreeDecomposition) -> list[str]:
    errors = _structure_violations(d)
    if errors:
        return errors
    for n, bag in d.bags.items():
        bad = [v for v in bag if not 1 <= v <= g.vertex_count]
        if bad:
            errors.append(f"bag {n!r}: vertices out of range {sorted(bad)}")
    for u, v in g.edges:
        if not any(u in b and v in b for b in d.bags.values()):
            errors.append(f"axiom 1: edge ({u},{v}) is in no bag")
    for v in g.vertices:
        holders = {n for n, b in d.bags.items() if v in b}
        if not holders:
            errors.append(f"axiom 2: vertex {v} is in no bag")
            continue
        # connected iff exactly one holder has its parent outside the set
        tops = [n for n in holders if d.parent[n] not in holders]
        if len(tops) != 1:
            errors.append(f"axiom 2: bags containing vertex {v} are disconnected "
                          f"(tops {sorted(map(str, tops))})")
    return errors


def validate_decomposition(g: MaximalGraph, d: TreeDecomposition) -> int | list[str]:
    """Width if both decomposition axioms hold, else the list of violations."""
    errors = decomposition_violations(g, d)
    return errors if errors else d.width


# ---------------------------------------------------------------------------
# construction


def _contract_subsumed(bags: dict[int, frozenset[int]], adj: dict[int, set[int]]) -> None:
    changed = True
    while changed:
        changed = False
        for a in sorted(adj):
            for b in sorted(adj[a]):
                if bags[a] <= bags[b]:
                    for c in adj[a] - {b}:
                        adj[c].discard(a)
                        adj[c].add(b)
                        adj[b].add(c)
                    adj[b].discard(a)
                    del adj[a], bags[a]
                    changed = True
                    break
            if changed:
                break


def _center(adj: Mapping[int, set[int]]) -> int:
    """Node of minimum eccentricity (smallest id on ties)."""
    nodes = sorted(adj)
    if len(nodes) == 1:
        return nodes[0]
    leaves = [n for n in nodes if len(adj[n]) <= 1]
    degree = {n: len(adj[n]) for n in nodes}
    remaining = len(nodes)
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for leaf in leaves:
            for m in adj[leaf]:
                degree[m] -= 1
                if degree[m] == 1:
                    nxt.append(m)
            degree[leaf] = 0
        leaves = nxt
    return min(leaves)


def _rooted(vertex_count: int, bags: Mapping[int, frozenset[int]], adj: Mapping[int, set[int]],
            root: int) -> TreeDecomposition:
    children: dict[int, list[int]] = {n: [] for n in bags}
    seen = {root}
    queue = deque([root])
    while queue:
        n = queue.popleft()
        for m in sorted(adj[n]):
            if m not in seen:
                seen.add(m)
                children[n].append(m)
                queue.append(m)
    return TreeDecomposition.build(vertex_count, root, bags, children)


def heuristic_decomposition(g: MaximalGraph) -> TreeDecomposition:
    """Min-fill elimination decomposition of the underlying undirected graph."""
    ug = nx.Graph()
    ug.add_nodes_from(g.vertices)
    ug.add_edges_from((u, v) for u, v in g.edges if u != v)
    _, tree = treewidth_min_fill_in(ug)
    order = sorted(tree.nodes, key=lambda b: (len(b), sorted(b)))
    ids = {b: i for i, b in enumerate(order)}
    bags = {ids[b]: frozenset(b) for b in order}
    adj = {ids[b]: {ids[c] for c in tree.neighbors(b)} for b in order}
    # networkx may leave pieces unconnected when the graph is disconnected
    comps = list(nx.connected_components(nx.Graph([(a, b) for a in adj for b in adj[a]] or [])))
    covered = set().union(*comps) if comps else set()
    pieces = comps + [{n} for n in adj if n not in covered]
    for a, b in zip(pieces, pieces[1:]):
        x, y = min(a), min(b)
        adj[x].add(y)
        adj[y].add(x)
    _contract_subsumed(bags, adj)
    return _rooted(g.vertex_count, bags, adj, _center(adj)).relabelled()


# ---------------------------------------------------------------------------
# binarization and balancing


@dataclass(frozen=True)
class BalanceConfig:
    c: float = 4.0
    width_cap: int = 64
    force: bool = False  # balance even when the plain binarization meets the height bound

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ValueError("balance coefficient c must be >= 1")
        if self.width_cap < 0:
            raise ValueError("width_cap must be non-negative")

    def height_bound(self, vertex_count: int) -> float:
        return self.c * (math.log2(vertex_count) + 1)


class _Builder:
    def __init__(self) -> None:
        self.bags: dict[int, frozenset[int]] = {}
        self.children: dict[int, list[int]] = {}

    def node(self, bag: frozenset[int], kids: list[int]) -> int:
        n = len(self.bags)
        self.bags[n] = bag
        self.children[n] = kids
        return n


def _binary_node(b: _Builder, bag: frozenset[int], kids: list[tuple[int, int]]) -> tuple[int, int]:
    """Attach weighted subtrees ``(size, node)`` below a node with ``bag``.

    Two or more children are merged Huffman-style through copies of ``bag``
    so that heavy subtrees stay shallow; a single child gets a padding leaf.
    """
    if not kids:
        return 1, b.node(bag, [])
    if len(kids) == 1:
        size, k = kids[0]
        pad = b.node(bag, [])
        return size + 2, b.node(bag, [k, pad])
    tie = itertools.count()
    heap = [(s, next(tie), k) for s, k in kids]
    heapq.heapify(heap)
    while len(heap) > 2:
        s1, _, k1 = heapq.heappop(heap)
        s2, _, k2 = heapq.heappop(heap)
        heapq.heappush(heap, (s1 + s2 + 1, next(tie), b.node(bag, [k1, k2])))
    (s1, _, k1), (s2, _, k2) = sorted(heap, key=lambda t: t[1])
    return s1 + s2 + 1, b.node(bag, [k1, k2])


def binarize(d: TreeDecomposition) -> TreeDecomposition:
    """Full binary ordered version of ``d`` with the same width."""
    b = _Builder()
    memo: dict[Node, tuple[int, int]] = {}
    for n in reversed(d.preorder()):
        memo[n] = _binary_node(b, d.bags[n], [memo[k] for k in d.children.get(n, ())])
    out = TreeDecomposition.build(d.vertex_count, memo[d.root][1], b.bags, b.children)
    return out.relabelled()


def _undirected(d: TreeDecomposition) -> dict[Node, set[Node]]:
    adj: dict[Node, set[Node]] = {n: set() for n in d.bags}
    for n, kids in d.children.items():
        for k in kids:
            adj[n].add(k)
            adj[k].add(n)
    return adj


def _component_order(comp: set[Node], adj, start: Node) -> list[Node]:
    order, seen, queue = [], {start}, deque([start])
    while queue:
        n = queue.popleft()
        order.append(n)
        for m in adj[n]:
            if m in comp and m not in seen:
                seen.add(m)
                queue.append(m)
    return order


def _centroid(comp: set[Node], adj, key) -> Node:
    start = min(comp, key=key)
    order = _component_order(comp, adj, start)
    parent = {start: None}
    for n in order:
        for m in adj[n]:
            if m in comp and m not in parent:
                parent[m] = n
    size = {n: 1 for n in order}
    for n in reversed(order):
        if parent[n] is not None:
            size[parent[n]] += size[n]
    total = len(order)
    best, best_key = None, None
    for n in order:
        heaviest = total - size[n]
        for m in adj[n]:
            if m in comp and parent.get(m) == n:
                heaviest = max(heaviest, size[m])
        k = (heaviest, key(n))
        if best_key is None or k < best_key:
            best, best_key = n, k
    return best


def _path(comp: set[Node], adj, a: Node, b: Node) -> list[Node]:
    parent = {a: None}
    queue = deque([a])
    while queue:
        n = queue.popleft()
        if n == b:
            break
        for m in adj[n]:
            if m in comp and m not in parent:
                parent[m] = n
                queue.append(m)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def _balanced(d: TreeDecomposition) -> TreeDecomposition:
    """Recursive centroid/path splitting of the decomposition tree.

    Every processed component has at most two tree edges to already placed
    nodes; a new bag is the union of one original bag and the two interface
    intersections, so it merges at most three original bags.
    """
    adj = _undirected(d)
    rank = {n: i for i, n in enumerate(d.preorder())}
    key = rank.__getitem__
    b = _Builder()

    def build(comp: set[Node], boundary: list[tuple[Node, Node]]) -> tuple[int, int]:
        interface: frozenset[int] = frozenset().union(
            *(d.bags[c] & d.bags[o] for c, o in boundary)) if boundary else frozenset()
        centre = _centroid(comp, adj, key)
        if len(boundary) <= 1:
            split = centre
        else:
            path = _path(comp, adj, boundary[0][0], boundary[1][0])
            on_path = set(path)
            # project the centroid onto the boundary path
            trail = _path(comp, adj, centre, path[0])
            split = next(n for n in trail if n in on_path)
        rest = comp - {split}
        kids = []
        for t in sorted((m for m in adj[split] if m in rest), key=key):
            part = set(_component_order(rest, adj, t))
            inherited = [(c, o) for c, o in boundary if c in part]
            kids.append(build(part, [(t, split)] + inherited))
        return _binary_node(b, interface | d.bags[split], kids)

    _, root = build(set(d.bags), [])
    return TreeDecomposition.build(d.vertex_count, root, b.bags, b.children).relabelled()


def binarize_and_balance(d: TreeDecomposition, cfg: BalanceConfig = BalanceConfig()) -> TreeDecomposition:
    """Binary ordered decomposition meeting the declared width/height/size bounds.

    The plain binarization (rooted at the tree centre) is kept when it already
    satisfies the height bound; otherwise the tree is rebalanced, which may
    grow the width up to ``3w + 2``.
    """
    out = None
    if not cfg.force:
        adj = _undirected(d)
        ids = {n: i for i, n in enumerate(d.preorder())}
        rerooted = _rooted(
            d.vertex_count, {ids[n]: d.bags[n] for n in d.bags},
            {ids[n]: {ids[m] for m in adj[n]} for n in adj}, _center(
                {ids[n]: {ids[m] for m in adj[n]} for n in adj}))
        plain = binarize(rerooted)
        if plain.height() <= cfg.height_bound(d.vertex_count):
            out = plain
    if out is None:
        out = _balanced(d)
    if out.width > cfg.width_cap:
        raise WidthCapExceeded(f"balanced width {out.width} exceeds cap {cfg.width_cap}")
    return out


def reroot(d: TreeDecomposition, root: Node, rng: random.Random | None = None) -> TreeDecomposition:
    """Same unordered tree hung from ``root``; child order shuffled when ``rng`` is given."""
    adj = _undirected(d)
    children: dict[Node, list[Node]] = {n: [] for n in d.bags}
    seen = {root}
    queue = deque([root])
    while queue:
        n = queue.popleft()
        nbrs = sorted((m for m in adj[n] if m not in seen), key=str)
        if rng is not None:
            rng.shuffle(nbrs)
        for m in nbrs:
            seen.add(m)
            children[n].append(m)
            queue.append(m)
    return TreeDecomposition.build(d.vertex_count, root, d.bags, children)


# ---------------------------------------------------------------------------
# coloring and succinct labels


@dataclass(frozen=True, order=True)
class SuccinctLabel:
    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        # labels key every automaton memo; hash once
        object.__setattr__(self, "_hash", hash((self.A, self.B, self.C)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def of(cls, A: Iterable[int] = (), B: Iterable[int] = (),
           C: Iterable[tuple[int, int]] = ()) -> "SuccinctLabel":
        return cls(frozenset(A), frozenset(B), frozenset((int(a), int(b)) for a, b in C))

    def is_well_formed(self) -> bool:
        bag = self.A | self.B
        return not (self.A & self.B) and all(
            a in bag and b in bag and not (a in self.A and b in self.A) for a, b in self.C)

    def __str__(self) -> str:
        def s(xs):
            return "{" + ",".join(map(str, sorted(xs))) + "}"
        cs = "{" + ",".join(f"({a},{b})" for a, b in sorted(self.C)) + "}"
        return f"A={s(self.A)} B={s(self.B)} C={cs}"

    def sort_key(self) -> tuple:
        return (sorted(self.A), sorted(self.B), sorted(self.C))


def proper_coloring(d: TreeDecomposition, rng: random.Random | None = None) -> dict[int, int]:
    """Top-down coloring, injective on every bag, using colors ``0..width``.

    Deterministic by default: smallest free color, children left to right,
    new vertices of a bag in increasing order. With ``rng`` the free color is
    drawn at random instead.
    """
    palette = range(d.width + 1)
    chi: dict[int, int] = {}
    for n in d.preorder():
        bag = d.bags[n]
        used = {chi[v] for v in bag if v in chi}
        for v in sorted(bag):
            if v in chi:
                continue
            free = [c for c in palette if c not in used]
            c = rng.choice(free) if rng is not None else free[0]
            chi[v] = c
            used.add(c)
    return chi


def is_proper_coloring(d: TreeDecomposition, chi: Mapping[int, int]) -> bool:
    return all(len({chi[v] for v in bag}) == len(bag) for bag in d.bags.values())


def intro_node_map(d: TreeDecomposition, edges: Iterable[Edge]) -> dict[Edge, Node]:
    """Topmost node whose bag holds both endpoints, per edge."""
    order = d.preorder()
    depth = {d.root: 0}
    for n in order:
        for k in d.children.get(n, ()):
            depth[k] = depth[n] + 1
    by_depth = sorted(order, key=depth.__getitem__)
    out = {}
    for e in edges:
        u, v = e
        node = next((n for n in by_depth if u in d.bags[n] and v in d.bags[n]), None)
        if node is None:
            raise NoContainingBag(f"no bag contains edge {e}")
        out[e] = node
    return out


def succinct_labels(d: TreeDecomposition, chi: Mapping[int, int],
                    present: SubgraphState | Iterable[Edge]) -> dict[Node, SuccinctLabel]:
    edges = present.present if isinstance(present, SubgraphState) else frozenset(present)
    labels = {}
    for n, bag in d.bags.items():
        shared = d.shared_with_parent(n)
        c = {(chi[u], chi[v]) for u, v in edges
             if u in bag and v in bag and not (u in shared and v in shared)}
        labels[n] = SuccinctLabel(frozenset(chi[v] for v in shared),
                                  frozenset(chi[v] for v in bag - shared), frozenset(c))
    return labels


def realizable_labels(d: TreeDecomposition, chi: Mapping[int, int], g: MaximalGraph, n: Node,
                      cap: int = 16) -> list[SuccinctLabel]:
    bag = d.bags[n]
    shared = d.shared_with_parent(n)
    intro = [(chi[u], chi[v]) for u, v in g.edges
             if u in bag and v in bag and not (u in shared and v in shared)]
    if len(intro) > cap:
        raise LabelBudgetExceeded(f"node {n!r} introduces {len(intro)} edges (cap {cap})")
    A = frozenset(chi[v] for v in shared)
    B = frozenset(chi[v] for v in bag - shared)
    return [SuccinctLabel(A, B, frozenset(p for j, p in enumerate(intro) if mask >> j & 1))
            for mask in range(1 << len(intro))]


# ---------------------------------------------------------------------------
# post order and bottom-up progression


@dataclass(frozen=True, eq=False)
class Progression:
    posti: dict[Node, int]
    order: tuple[Node, ...]  # order[i - 1] is the node with post index i
    sets: tuple[tuple[Node, ...], ...]  # sets[i] = S_i, sorted by post index

    def node(self, i: int) -> Node:
        return self.order[i - 1]

    def __len__(self) -> int:
        return len(self.order)


def post_order(d: TreeDecomposition) -> dict[Node, int]:
    posti: dict[Node, int] = {}
    stack: list[tuple[Node, bool]] = [(d.root, False)]
    while stack:
        n, expanded = stack.pop()
        if expanded:
            posti[n] = len(posti) + 1
            continue
        stack.append((n, True))
        for k in reversed(d.children.get(n, ())):
            stack.append((k, False))
    return posti


def bottom_up_progression(d: TreeDecomposition, posti: Mapping[Node, int] | None = None) -> Progression:
    if posti is None:
        posti = post_order(d)
    size = len(posti)
    order = tuple(sorted(posti, key=posti.__getitem__))
    members: list[list[Node]] = [[] for _ in range(size + 1)]
    for n, i in posti.items():
        p = d.parent[n]
        # n is in S_j exactly for posti(n) <= j < posti(parent)
        end = size if p is None else posti[p] - 1
        for j in range(i, end + 1):
            members[j].append(n)
    sets = tuple(tuple(sorted(m, key=posti.__getitem__)) for m in members)
    return Progression(dict(posti), order, sets)


def progression_by_definition(d: TreeDecomposition, posti: Mapping[Node, int]) -> list[set[Node]]:
    """Literal set-builder evaluation, kept as an independent check."""
    def ancestors(n):
        p = d.parent[n]
        while p is not None:
            yield p
            p = d.parent[p]

    return [{n for n in posti if posti[n] <= i and all(posti[m] > i for m in ancestors(n))}
            for i in range(len(posti) + 1)]


def progression_violations(d: TreeDecomposition, prog: Progression | None = None) -> list[str]:
    """Check ``|S_i| <= 2h`` and the one-step evolution of a binary decomposition's progression."""
    prog = prog or bottom_up_progression(d)
    h = d.height()
    bad = []
    for i in range(1, len(prog) + 1):
        prev, cur, n = set(prog.sets[i - 1]), set(prog.sets[i]), prog.node(i)
        if len(cur) > 2 * h:
            bad.append(f"|S_{i}| = {len(cur)} exceeds 2h = {2 * h}")
        kids = set(d.children.get(n, ()))
        if kids and not (kids <= prev and cur == (prev - kids) | {n}):
            bad.append(f"S_{i} is not S_{i - 1} with the children of {n!r} merged into it")
        if not kids and cur != prev | {n}:
            bad.append(f"S_{i} is not S_{i - 1} plus the leaf {n!r}")
    if prog.sets[-1] != (d.root,):
        bad.append("the last set is not the root alone")
    return bad


def edge_intro_level(d: TreeDecomposition, e: Edge,
                     posti: Mapping[Node, int] | None = None) -> tuple[Node, int]:
    if posti is None:
        posti = post_order(d)
    node = intro_node_map(d, [e])[e]
    return node, posti[node]


# ---------------------------------------------------------------------------
# text format


def format_decomposition(d: TreeDecomposition) -> str:
    order = d.preorder()
    ids = {n: i + 1 for i, n in enumerate(order)}
    maxbag = max(len(b) for b in d.bags.values())
    lines = [f"s td {len(order)} {maxbag} {d.vertex_count}"]
    for n in order:
        lines.append(" ".join(["b", str(ids[n])] + [str(v) for v in sorted(d.bags[n])]))
    for n in order:
        p = d.parent[n]
        if p is None:
            lines.append(f"n {ids[n]} 0 root")
        else:
            side = "L" if d.children[p][0] == n else "R"
            lines.append(f"n {ids[n]} {ids[p]} {side}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    links: dict[int, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        try:
            if tok[0] == "s" and len(tok) == 5 and tok[1] == "td":
                header = (int(tok[2]), int(tok[3]), int(tok[4]))
            elif tok[0] == "b" and len(tok) >= 2:
                bags[int(tok[1])] = frozenset(int(v) for v in tok[2:])
            elif tok[0] == "n" and len(tok) == 4 and tok[3] in ("L", "R", "root"):
                links[int(tok[1])] = (int(tok[2]), tok[3])
            else:
                raise FormatError(f"unrecognised line {raw.strip()!r}", lineno)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
    if header is None:
        raise FormatError("missing 's td' header")
    count, _, vertex_count = header
    if len(bags) != count:
        raise FormatError(f"header declares {count} bags, found {len(bags)}")
    if set(links) != set(bags):
        raise FormatError("every bag needs exactly one 'n' line")
    roots = [n for n, (p, side) in links.items() if side == "root"]
    if len(roots) != 1 or links[roots[0]][0] != 0:
        raise FormatError("exactly one node must be 'root' with parent 0")
    slots: dict[int, dict[str, int]] = {n: {} for n in bags}
    for n, (p, side) in links.items():
        if side == "root":
            continue
        if p not in bags:
            raise FormatError(f"node {n} has unknown parent {p}")
        if side in slots[p]:
            raise FormatError(f"node {p} has two {side} children")
        slots[p][side] = n
    children = {}
    for n, s in slots.items():
        if "R" in s and "L" not in s:
            raise FormatError(f"node {n} has a right child but no left child")
        children[n] = [s[k] for k in ("L", "R") if k in s]
    return TreeDecomposition.build(vertex_count, roots[0], bags, children)

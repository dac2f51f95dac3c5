"""Deterministic bottom-up tree automata, runs, state progressions and the
usual closure operations (product, complement, projection, subset
construction, minimization).

Any object with ``initial``, ``step(q1, q2, symbol)`` and ``is_accepting(q)``
can be run on a tree; :class:`TreeAutomaton` is the explicit dense-table
implementation, compiled MSO automata provide the same protocol lazily.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Protocol, Sequence

import numpy as np

from .errors import (AlphabetMismatch, DomainMismatch, FormatError, IncompleteTransitions,
                     NondeterministicComplement, StateBudgetExceeded, UnknownLabel)
from .treedec import Progression, SuccinctLabel, TreeDecomposition, bottom_up_progression

Symbol = Hashable
State = Hashable


class Automaton(Protocol):
    initial: State

    def step(self, left: State, right: State, symbol: Symbol) -> State: ...

    def is_accepting(self, q: State) -> bool: ...


class TreeAutomaton:
    """Explicit deterministic automaton with a dense ``|Q| x |Q| x |Sigma|`` table.

    States are the integers ``0..k-1``; ``names`` only matters for display.
    """

    def __init__(self, n_states: int, alphabet: Sequence[Symbol], initial: int,
                 accepting: Iterable[int], table: np.ndarray,
                 names: Sequence[str] | None = None) -> None:
        table = np.asarray(table, dtype=np.int32)
        k, m = n_states, len(alphabet)
        if table.shape != (k, k, m):
            raise IncompleteTransitions(f"table shape {table.shape} != {(k, k, m)}")
        if m and (table.min() < 0 or table.max() >= k):
            raise IncompleteTransitions("transition table has undefined or out-of-range entries")
        if not 0 <= initial < k:
            raise ValueError("initial state out of range")
        self.n_states = k
        self.alphabet = tuple(alphabet)
        self.index = {s: i for i, s in enumerate(self.alphabet)}
        if len(self.index) != m:
            raise ValueError("duplicate alphabet symbols")
        self.initial = initial
        self.accepting = frozenset(int(q) for q in accepting)
        self.table = table
        self.table.setflags(write=False)
        self.names = list(names) if names is not None else [f"q{i}" for i in range(k)]

    @classmethod
    def from_function(cls, n_states: int, alphabet: Sequence[Symbol], initial: int,
                      accepting: Iterable[int], delta: Callable[[int, int, Symbol], int],
                      names: Sequence[str] | None = None) -> "TreeAutomaton":
        table = np.empty((n_states, n_states, len(alphabet)), dtype=np.int32)
        for q1 in range(n_states):
            for q2 in range(n_states):
                for j, s in enumerate(alphabet):
                    table[q1, q2, j] = delta(q1, q2, s)
        return cls(n_states, alphabet, initial, accepting, table, names)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def symbol_id(self, symbol: Symbol) -> int:
        try:
            return self.index[symbol]
        except KeyError:
            raise UnknownLabel(f"label {symbol} is not in the alphabet") from None

    def step(self, left: int, right: int, symbol: Symbol) -> int:
        return int(self.table[left, right, self.symbol_id(symbol)])

    def is_accepting(self, q: int) -> bool:
        return q in self.accepting

    def __repr__(self) -> str:
        return f"TreeAutomaton(states={self.n_states}, symbols={len(self.alphabet)})"


@dataclass(frozen=True, eq=False)
class LabeledTree:
    """Binary ordered tree; every node has zero or two children."""

    root: Hashable
    children: Mapping[Hashable, tuple]
    labels: Mapping[Hashable, Symbol]

    @classmethod
    def from_decomposition(cls, d: TreeDecomposition, labels: Mapping) -> "LabeledTree":
        return cls(d.root, {n: tuple(d.children.get(n, ())) for n in d.bags}, dict(labels))

    def relabel(self, node, symbol) -> "LabeledTree":
        labels = dict(self.labels)
        labels[node] = symbol
        return LabeledTree(self.root, self.children, labels)

    def postorder(self) -> list:
        out, stack = [], [(self.root, False)]
        while stack:
            n, done = stack.pop()
            if done:
                out.append(n)
                continue
            stack.append((n, True))
            stack.extend((k, False) for k in reversed(self.children.get(n, ())))
        return out

    def as_decomposition(self) -> TreeDecomposition:
        nodes = self.postorder()
        return TreeDecomposition.build(0, self.root, {n: () for n in nodes},
                                       {n: self.children.get(n, ()) for n in nodes})


def run(a: Automaton, t: LabeledTree) -> dict:
    rho: dict = {}
    for n in t.postorder():
        kids = t.children.get(n, ())
        if kids:
            m1, m2 = kids
            rho[n] = a.step(rho[m1], rho[m2], t.labels[n])
        else:
            rho[n] = a.step(a.initial, a.initial, t.labels[n])
    return rho


def accepts(a: Automaton, t: LabeledTree) -> bool:
    return a.is_accepting(run(a, t)[t.root])


def pi_step(a: Automaton, pi: Mapping, gamma: Symbol, i: int, prog: Progression,
            t: LabeledTree) -> dict:
    """Extend the run restricted to ``S_{i-1}`` to ``S_i`` by one local step."""
    if set(pi) != set(prog.sets[i - 1]):
        raise DomainMismatch(f"assignment domain {sorted(map(str, pi))} is not S_{i - 1}")
    n = prog.node(i)
    kids = t.children.get(n, ())
    if kids:
        m1, m2 = kids
        q = a.step(pi[m1], pi[m2], gamma)
    else:
        q = a.step(a.initial, a.initial, gamma)
    out = {m: pi[m] for m in prog.sets[i] if m != n}
    out[n] = q
    return out


def state_progression(a: Automaton, t: LabeledTree, prog: Progression | None = None) -> list[dict]:
    if prog is None:
        prog = bottom_up_progression(t.as_decomposition())
    seq: list[dict] = [{}]
    for i in range(1, len(prog) + 1):
        seq.append(pi_step(a, seq[-1], t.labels[prog.node(i)], i, prog, t))
    return seq


# ---------------------------------------------------------------------------
# algebra


class NondeterministicTreeAutomaton:
    """Bottom-up automaton whose transitions yield sets of states."""

    def __init__(self, n_states: int, alphabet: Sequence[Symbol], initial: int,
                 accepting: Iterable[int],
                 transitions: Mapping[tuple[int, int, int], frozenset[int]]) -> None:
        self.n_states = n_states
        self.alphabet = tuple(alphabet)
        self.index = {s: i for i, s in enumerate(self.alphabet)}
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.transitions = dict(transitions)

    def targets(self, q1: int, q2: int, j: int) -> frozenset[int]:
        return self.transitions.get((q1, q2, j), frozenset())


def _same_alphabet(a: TreeAutomaton, b: TreeAutomaton) -> None:
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch("automata are over different alphabets")


def _table_array(n: int, m: int, table: Mapping[tuple[int, int, int], int]) -> np.ndarray:
    arr = np.full((n, n, m), -1, dtype=np.int32)
    for (i1, i2, j), r in table.items():
        arr[i1, i2, j] = r
    return arr


def _closure(alphabet: Sequence[Symbol], start, step: Callable, budget: int | None = None):
    """Reachable states and full transition table for a deterministic step function."""
    states = [start]
    ids = {start: 0}
    table: dict[tuple[int, int, int], int] = {}
    m = len(alphabet)
    frontier = 0
    while frontier < len(states):
        upto = len(states)
        for i1 in range(upto):
            for i2 in range(upto):
                if i1 < frontier and i2 < frontier:
                    continue
                for j in range(m):
                    r = step(states[i1], states[i2], j)
                    if r not in ids:
                        ids[r] = len(states)
                        states.append(r)
                        if budget is not None and len(states) > budget:
                            raise StateBudgetExceeded(f"more than {budget} states")
                    table[i1, i2, j] = ids[r]
        frontier = upto
    return states, _table_array(len(states), m, table)


def product(a: TreeAutomaton, b: TreeAutomaton, mode: str = "and") -> TreeAutomaton:
    _same_alphabet(a, b)
    alphabet = a.alphabet
    bj = [b.symbol_id(s) for s in alphabet]
    states, table = _closure(
        alphabet, (a.initial, b.initial),
        lambda x, y, j: (int(a.table[x[0], y[0], j]), int(b.table[x[1], y[1], bj[j]])))
    if mode == "and":
        acc = [i for i, (p, q) in enumerate(states) if p in a.accepting and q in b.accepting]
    elif mode == "or":
        acc = [i for i, (p, q) in enumerate(states) if p in a.accepting or q in b.accepting]
    else:
        raise ValueError(f"unknown product mode {mode!r}")
    return TreeAutomaton(len(states), alphabet, 0, acc, table)


def complement(a) -> TreeAutomaton:
    if not isinstance(a, TreeAutomaton):
        raise NondeterministicComplement("complement needs a deterministic total automaton")
    return TreeAutomaton(a.n_states, a.alphabet, a.initial,
                         set(a.states) - a.accepting, a.table, a.names)


def inject(a: TreeAutomaton) -> NondeterministicTreeAutomaton:
    trans = {}
    k, _, m = a.table.shape
    for q1 in range(k):
        for q2 in range(k):
            for j in range(m):
                trans[q1, q2, j] = frozenset({int(a.table[q1, q2, j])})
    return NondeterministicTreeAutomaton(k, a.alphabet, a.initial, a.accepting, trans)


def project(a: TreeAutomaton | NondeterministicTreeAutomaton, track: int) -> NondeterministicTreeAutomaton:
    """Erase component ``track`` of every (tuple) alphabet symbol."""
    nta = inject(a) if isinstance(a, TreeAutomaton) else a
    alphabet: list[Symbol] = []
    where: dict[Symbol, int] = {}
    image = []
    for s in nta.alphabet:
        if not isinstance(s, tuple) or not 0 <= track < len(s):
            raise AlphabetMismatch(f"symbol {s!r} has no track {track}")
        p = s[:track] + s[track + 1:]
        if p not in where:
            where[p] = len(alphabet)
            alphabet.append(p)
        image.append(where[p])
    trans: dict[tuple[int, int, int], set[int]] = {}
    for (q1, q2, j), ts in nta.transitions.items():
        trans.setdefault((q1, q2, image[j]), set()).update(ts)
    return NondeterministicTreeAutomaton(
        nta.n_states, alphabet, nta.initial, nta.accepting,
        {k: frozenset(v) for k, v in trans.items()})


def determinize(nta: NondeterministicTreeAutomaton, budget: int | None = None) -> TreeAutomaton:
    def step(x: frozenset, y: frozenset, j: int) -> frozenset:
        out: set[int] = set()
        for p in x:
            for q in y:
                out |= nta.targets(p, q, j)
        return frozenset(out)

    states, table = _closure(nta.alphabet, frozenset({nta.initial}), step, budget)
    acc = [i for i, s in enumerate(states) if s & nta.accepting]
    return TreeAutomaton(len(states), nta.alphabet, 0, acc, table)


def minimize(a: TreeAutomaton) -> TreeAutomaton:
    """Restrict to reachable states, then refine the bottom-up congruence."""
    states, table = _closure(a.alphabet, a.initial, lambda x, y, j: int(a.table[x, y, j]))
    k = len(states)
    cls = np.array([1 if q in a.accepting else 0 for q in states], dtype=np.int64)
    while True:
        left = cls[table].reshape(k, -1)  # class of delta(q, p, s) over (p, s)
        right = cls[table.transpose(1, 0, 2)].reshape(k, -1)
        sig = np.concatenate([cls[:, None], left, right], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1)
        if len(set(new.tolist())) == len(set(cls.tolist())):
            break
        cls = new
    # renumber classes so that the initial state's class is 0 and ids follow discovery
    order: dict[int, int] = {}
    for q in range(k):
        order.setdefault(int(cls[q]), len(order))
    rep = {}
    for q in range(k):
        rep.setdefault(order[int(cls[q])], q)
    n = len(order)
    out = np.empty((n, n, len(a.alphabet)), dtype=np.int32)
    remap = np.array([order[int(c)] for c in cls], dtype=np.int32)
    for c1 in range(n):
        for c2 in range(n):
            out[c1, c2, :] = remap[table[rep[c1], rep[c2], :]]
    acc = {order[int(cls[q])] for q in range(k) if states[q] in a.accepting}
    return TreeAutomaton(n, a.alphabet, 0, acc, out)


def automaton_algebra(op: str, *args, **kwargs):
    ops = {
        "product-and": lambda a, b: product(a, b, "and"),
        "product-or": lambda a, b: product(a, b, "or"),
        "complement": complement,
        "project-set-bit": lambda a, track: determinize(project(a, track), **kwargs),
        "determinize": lambda a: determinize(a, **kwargs),
        "minimize": minimize,
    }
    if op not in ops:
        raise ValueError(f"unknown automaton operation {op!r}")
    return ops[op](*args)


def materialize(a: Automaton, alphabet: Sequence[Symbol], budget: int | None = None,
                do_minimize: bool = True) -> TreeAutomaton:
    """Explicit table of a protocol automaton over ``alphabet`` (reachable part)."""
    alphabet = list(alphabet)
    states, table = _closure(alphabet, a.initial,
                             lambda x, y, j: a.step(x, y, alphabet[j]), budget)
    acc = [i for i, q in enumerate(states) if a.is_accepting(q)]
    dta = TreeAutomaton(len(states), alphabet, 0, acc, table)
    return minimize(dta) if do_minimize else dta


# ---------------------------------------------------------------------------
# text format

_LABEL_RE = re.compile(r"^A=\{([^}]*)\}\s+B=\{([^}]*)\}\s+C=\{(.*)\}$")
_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_label(text: str) -> SuccinctLabel:
    m = _LABEL_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad label {text!r}")

    def ints(s: str) -> list[int]:
        return [int(x) for x in s.split(",") if x.strip()]

    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(m.group(3))]
    return SuccinctLabel.of(ints(m.group(1)), ints(m.group(2)), pairs)


def format_automaton(a: TreeAutomaton) -> str:
    lines = ["dta", f"states {a.n_states}", f"initial {a.initial}",
             "accepting " + " ".join(str(q) for q in sorted(a.accepting))]
    for j, s in enumerate(a.alphabet):
        lines.append(f"label {j} {s}")
    k, _, m = a.table.shape
    for q1 in range(k):
        for q2 in range(k):
            for j in range(m):
                lines.append(f"delta {q1} {q2} {j} {int(a.table[q1, q2, j])}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str) -> TreeAutomaton:
    n_states = initial = None
    accepting: list[int] = []
    labels: dict[int, SuccinctLabel] = {}
    entries: list[tuple[int, int, int, int, int]] = []
    seen_magic = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "dta" and len(tok) == 1:
                seen_magic = True
            elif tok[0] == "states" and len(tok) == 2:
                n_states = int(tok[1])
            elif tok[0] == "initial" and len(tok) == 2:
                initial = int(tok[1])
            elif tok[0] == "accepting":
                accepting = [int(x) for x in tok[1:]]
            elif tok[0] == "label" and len(tok) >= 2:
                labels[int(tok[1])] = parse_label(line.split(None, 2)[2] if len(tok) > 2 else "")
            elif tok[0] == "delta" and len(tok) == 5:
                entries.append((lineno, *map(int, tok[1:])))
            else:
                raise FormatError(f"unrecognised line {line!r}", lineno)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
    if not seen_magic or n_states is None or initial is None:
        raise FormatError("missing 'dta', 'states' or 'initial' line")
    ids = sorted(labels)
    if ids != list(range(len(ids))):
        raise FormatError("label ids must be 0..m-1")
    table = np.full((n_states, n_states, len(ids)), -1, dtype=np.int32)
    for lineno, q1, q2, j, r in entries:
        if not (0 <= q1 < n_states and 0 <= q2 < n_states and 0 <= r < n_states and j in labels):
            raise FormatError("delta entry out of range", lineno)
        table[q1, q2, j] = r
    if (table < 0).any():
        q1, q2, j = map(int, np.argwhere(table < 0)[0])
        raise IncompleteTransitions(f"delta undefined on ({q1}, {q2}, label {j})")
    return TreeAutomaton(n_states, [labels[j] for j in ids], initial, accepting, table)

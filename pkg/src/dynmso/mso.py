"""MSO over directed graphs: syntax, brute-force semantics, and compilation to
bottom-up automata over succinct decomposition labels.

Grammar (loosest binding first)::

    formula := imp ('<->' imp)*
    imp     := or ('->' imp)?
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | quant | '(' formula ')' | atom
    quant   := ('forall' | 'exists') fovar '.' formula
             | ('forallS' | 'existsS') SetVar '.' formula
    atom    := 'edge' '(' fovar ',' fovar ')' | fovar '=' fovar | fovar 'in' SetVar

First-order variables start lowercase, set variables uppercase.

Compilation is lazy: every sub-formula becomes an automaton whose states are
semantic summaries of a subtree, interned to ints on first use, and whose
transitions are memoized.  A free first-order variable is "placed" at the
unique node whose ``B`` component holds its color; a free set variable is a
subset of ``B`` at each node.  :func:`materialize` turns the sentence
automaton into an explicit table over a finite label set.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .automaton import TreeAutomaton, materialize
from .errors import MsoSyntaxError, StateBudgetExceeded, TooLarge, UnboundVariable, UnknownLabel
from .treedec import SuccinctLabel

DEFAULT_STATE_BUDGET = 20_000
BRUTE_FORCE_CAP = 12


# ---------------------------------------------------------------------------
# syntax


@dataclass(frozen=True)
class EdgeAtom:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class In:
    x: str
    X: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of & | -> <->
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    kind: str  # forall | exists | forallS | existsS
    var: str
    body: "Formula"

    @property
    def is_set(self) -> bool:
        return self.kind.endswith("S")


Formula = Union[EdgeAtom, Eq, In, Not, BinOp, Quant]
FORMULA_TYPES = (EdgeAtom, Eq, In, Not, BinOp, Quant)

_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|().,=])|([A-Za-z][A-Za-z0-9_]*))")
_KEYWORDS = {"forall", "exists", "forallS", "existsS", "edge", "in"}


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line, line_start, pos = line + 1, pos + 1, pos + 1
            continue
        if ch.isspace():
            pos += 1
            continue
        if ch == "#":
            while pos < len(text) and text[pos] != "\n":
                pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.start(1 if m.group(1) else 2) != pos:
            raise MsoSyntaxError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        toks.append((m.group(1) or m.group(2), line, pos - line_start + 1))
        pos = m.end()
    toks.append(("<eof>", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def fail(self, msg: str):
        _, line, col = self.toks[self.i]
        raise MsoSyntaxError(msg, line, col)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            self.fail(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def fo_var(self) -> str:
        tok = self.peek()
        if tok in _KEYWORDS or not re.fullmatch(r"[a-z][A-Za-z0-9_]*", tok):
            self.fail(f"expected a first-order variable, found {tok!r}")
        return self.take()

    def set_var(self) -> str:
        tok = self.peek()
        if not re.fullmatch(r"[A-Z][A-Za-z0-9_]*", tok):
            self.fail(f"expected a set variable, found {tok!r}")
        return self.take()

    def formula(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = BinOp("<->", f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return BinOp("->", f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = BinOp("|", f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = BinOp("&", f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists", "forallS", "existsS"):
            self.take()
            var = self.set_var() if tok.endswith("S") else self.fo_var()
            self.take(".")
            return Quant(tok, var, self.formula())
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok == "edge":
            self.take()
            self.take("(")
            x = self.fo_var()
            self.take(",")
            y = self.fo_var()
            self.take(")")
            return EdgeAtom(x, y)
        x = self.fo_var()
        if self.peek() == "=":
            self.take()
            return Eq(x, self.fo_var())
        if self.peek() == "in":
            self.take()
            return In(x, self.set_var())
        self.fail(f"expected '=' or 'in' after {x!r}, found {self.peek()!r}")


def parse_mso(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek() != "<eof>":
        p.fail(f"unexpected {p.peek()!r} after formula")
    return f


def format_mso(f: Formula, top: bool = True) -> str:
    """Print ``f``; compound sub-formulas are parenthesized so parsing round-trips."""
    if isinstance(f, EdgeAtom):
        return f"edge({f.x}, {f.y})"
    if isinstance(f, Eq):
        return f"{f.x} = {f.y}"
    if isinstance(f, In):
        return f"{f.x} in {f.X}"
    if isinstance(f, Not):
        return "!" + format_mso(f.body, False)
    if isinstance(f, BinOp):
        s = f"{format_mso(f.left, False)} {f.op} {format_mso(f.right, False)}"
    else:
        s = f"{f.kind} {f.var}. {format_mso(f.body, True)}"
    return s if top else f"({s})"


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, EdgeAtom | Eq):
        return frozenset({f.x, f.y})
    if isinstance(f, In):
        return frozenset({f.x, f.X})
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BinOp):
        return free_variables(f.left) | free_variables(f.right)
    return free_variables(f.body) - {f.var}


# ---------------------------------------------------------------------------
# reference semantics


def brute_force_eval(f: Formula, vertices: Iterable[int], edges: Iterable[tuple[int, int]],
                     cap: int = BRUTE_FORCE_CAP) -> bool:
    vs = sorted(set(vertices))
    if len(vs) > cap:
        raise TooLarge(f"{len(vs)} vertices exceed the brute-force cap of {cap}")
    es = frozenset(edges)
    subsets = [frozenset(c) for r in range(len(vs) + 1) for c in itertools.combinations(vs, r)]

    def ev(g: Formula, env: dict) -> bool:
        if isinstance(g, EdgeAtom):
            return (env[g.x], env[g.y]) in es
        if isinstance(g, Eq):
            return env[g.x] == env[g.y]
        if isinstance(g, In):
            return env[g.x] in env[g.X]
        if isinstance(g, Not):
            return not ev(g.body, env)
        if isinstance(g, BinOp):
            a = ev(g.left, env)
            if g.op == "&":
                return a and ev(g.right, env)
            if g.op == "|":
                return a or ev(g.right, env)
            if g.op == "->":
                return (not a) or ev(g.right, env)
            return a == ev(g.right, env)
        domain = subsets if g.is_set else vs
        test = all if g.kind.startswith("forall") else any
        return test(ev(g.body, {**env, g.var: val}) for val in domain)

    unbound = free_variables(f)
    if unbound:
        raise UnboundVariable(f"free variables {sorted(unbound)}")
    return ev(f, {})


# ---------------------------------------------------------------------------
# lazy automata

_EMPTY_ENV: Mapping[str, object] = {}


class _Lazy:
    """Interned, memoized automaton over (label, variable tracks)."""

    fv: tuple[str, ...] = ()

    def __init__(self, budget: int) -> None:
        self.budget = budget
        self._objs: list = []
        self._ids: dict = {}
        self._memo: dict = {}
        self._acc: dict[int, bool] = {}
        self._status: dict[int, bool | None] = {}
        self._le: dict[tuple[int, int], bool] = {}

    def intern(self, obj) -> int:
        i = self._ids.get(obj)
        if i is None:
            i = len(self._objs)
            if i >= self.budget:
                raise StateBudgetExceeded(
                    f"{type(self).__name__} automaton exceeded {self.budget} states")
            self._ids[obj] = i
            self._objs.append(obj)
        return i

    @property
    def n_states(self) -> int:
        return len(self._objs)

    def step(self, q1: int, q2: int, label: SuccinctLabel, env: Mapping = _EMPTY_ENV) -> int:
        key = (q1, q2, label, *map(env.get, self.fv)) if self.fv else (q1, q2, label)
        r = self._memo.get(key)
        if r is None:
            r = self.intern(self._step(self._objs[q1], self._objs[q2], label, env))
            self._memo[key] = r
        return r

    def is_accepting(self, q: int) -> bool:
        r = self._acc.get(q)
        if r is None:
            r = self._acc[q] = bool(self._accept(self._objs[q]))
        return r

    def status(self, q: int) -> bool | None:
        """True/False if ``q`` accepts/rejects whatever the rest of the tree is."""
        try:
            return self._status[q]
        except KeyError:
            r = self._status[q] = self._absorbing(self._objs[q])
            return r

    def _absorbing(self, s) -> bool | None:
        return True if s == _TRUE else False if s == _FALSE else None

    def le(self, q1: int, q2: int) -> bool:
        """Sound test for: every context accepting from ``q1`` also accepts from ``q2``."""
        if q1 == q2 or self.status(q1) is False or self.status(q2) is True:
            return True
        if self.status(q1) is True or self.status(q2) is False:
            return False
        key = (q1, q2)
        r = self._le.get(key)
        if r is None:
            r = self._le[key] = self._le_objs(self._objs[q1], self._objs[q2])
        return r

    def _le_objs(self, s1, s2) -> bool:
        return False

    def _step(self, s1, s2, label, env):  # pragma: no cover - abstract
        raise NotImplementedError

    def _accept(self, s) -> bool:  # pragma: no cover - abstract
        raise NotImplementedError


_TRUE, _FALSE = "T", "F"


class _EdgeAuto(_Lazy):
    # pending state: (x placed, y placed, open A-colors that may still be the other endpoint)
    def __init__(self, x: str, y: str, budget: int) -> None:
        super().__init__(budget)
        self.x, self.y = x, y
        self.fv = tuple(sorted({x, y}))
        self.initial = self.intern((False, False, frozenset()))

    def _step(self, s1, s2, lab: SuccinctLabel, env):
        if _TRUE in (s1, s2):
            return _TRUE
        if _FALSE in (s1, s2):
            return _FALSE
        cx, cy = env.get(self.x), env.get(self.y)
        if s1[0] and s2[1] or s1[1] and s2[0]:
            return _FALSE  # endpoints in disjoint subtrees share no bag
        xp, yp = s1[0] or s2[0], s1[1] or s2[1]
        pend = s1[2] | s2[2]
        if cx is not None and cy is not None:
            return _TRUE if (cx, cy) in lab.C else _FALSE
        if cx is not None:
            if yp:
                return _TRUE if cx in pend else _FALSE
            pend = frozenset(c for c in lab.A if (cx, c) in lab.C)
            return (True, False, pend) if pend else _FALSE
        if cy is not None:
            if xp:
                return _TRUE if cy in pend else _FALSE
            pend = frozenset(c for c in lab.A if (c, cy) in lab.C)
            return (False, True, pend) if pend else _FALSE
        if xp or yp:
            pend &= lab.A
            return (xp, yp, pend) if pend else _FALSE
        return (False, False, frozenset())

    def _accept(self, s) -> bool:
        return s == _TRUE

    def _le_objs(self, s1, s2) -> bool:
        # more open endpoint colors can only help
        return s1[:2] == s2[:2] and s1[2] <= s2[2]


class _EqAuto(_Lazy):
    def __init__(self, x: str, y: str, budget: int) -> None:
        super().__init__(budget)
        self.x, self.y = x, y
        self.fv = tuple(sorted({x, y}))
        self.initial = self.intern((False, False))

    def _step(self, s1, s2, lab, env):
        if _TRUE in (s1, s2):
            return _TRUE
        if _FALSE in (s1, s2):
            return _FALSE
        cx, cy = env.get(self.x), env.get(self.y)
        xp, yp = s1[0] or s2[0], s1[1] or s2[1]
        if cx is not None and cy is not None:
            return _TRUE if cx == cy else _FALSE
        if (cx is not None and yp) or (cy is not None and xp) or (xp and yp):
            return _FALSE
        return (xp or cx is not None, yp or cy is not None)

    def _accept(self, s) -> bool:
        return s == _TRUE


class _InAuto(_Lazy):
    def __init__(self, x: str, X: str, budget: int) -> None:
        super().__init__(budget)
        self.x, self.X = x, X
        self.fv = (x, X)
        self.initial = self.intern(None)

    def _step(self, s1, s2, lab, env):
        if s1 is not None:
            return s1
        if s2 is not None:
            return s2
        cx = env.get(self.x)
        if cx is None:
            return None
        return _TRUE if cx in env.get(self.X, ()) else _FALSE

    def _accept(self, s) -> bool:
        return s == _TRUE


class _NotAuto:
    """Shares states with its body and flips acceptance."""

    def __init__(self, body) -> None:
        self.body = body
        self.fv = body.fv
        self.initial = body.initial

    @property
    def n_states(self) -> int:
        return self.body.n_states

    def step(self, q1, q2, label, env=_EMPTY_ENV):
        return self.body.step(q1, q2, label, env)

    def is_accepting(self, q) -> bool:
        return not self.body.is_accepting(q)

    def status(self, q) -> bool | None:
        r = self.body.status(q)
        return None if r is None else not r

    def le(self, q1, q2) -> bool:
        return self.body.le(q2, q1)


_BIN_STATUS = {
    "&": lambda a, b: False if False in (a, b) else True if a is True and b is True else None,
    "|": lambda a, b: True if True in (a, b) else False if a is False and b is False else None,
    "->": lambda a, b: True if a is False or b is True else False if a is True and b is False else None,
    "<->": lambda a, b: None if a is None or b is None else a == b,
}

_BIN = {
    "&": lambda a, b: a and b,
    "|": lambda a, b: a or b,
    "->": lambda a, b: (not a) or b,
    "<->": lambda a, b: a == b,
}


class _BinAuto(_Lazy):
    def __init__(self, op: str, left, right, budget: int) -> None:
        super().__init__(budget)
        self.op, self.left, self.right = op, left, right
        self.fv = tuple(sorted(set(left.fv) | set(right.fv)))
        self.initial = self.intern((left.initial, right.initial))

    def _step(self, s1, s2, lab, env):
        # a decided child subtree decides the whole tree
        for s in (s1, s2):
            if s == _TRUE or s == _FALSE:
                return s
        l = self.left.step(s1[0], s2[0], lab, env)
        r = self.right.step(s1[1], s2[1], lab, env)
        st = _BIN_STATUS[self.op](self.left.status(l), self.right.status(r))
        if st is not None:
            return _TRUE if st else _FALSE
        return (l, r)

    def _accept(self, s) -> bool:
        if s == _TRUE or s == _FALSE:
            return s == _TRUE
        return _BIN[self.op](self.left.is_accepting(s[0]), self.right.is_accepting(s[1]))

    def _le_objs(self, s1, s2) -> bool:
        (l1, r1), (l2, r2) = s1, s2
        if self.op == "<->":
            return l1 == l2 and r1 == r2
        left = self.left.le(l2, l1) if self.op == "->" else self.left.le(l1, l2)
        return left and self.right.le(r1, r2)


def _maximal(items, le) -> list[int]:
    # drop members dominated by another member; ties keep the smallest id
    keep: list[int] = []
    for q in sorted(items):
        if any(le(q, k) for k in keep):
            continue
        keep = [k for k in keep if not le(k, q)]
        keep.append(q)
    return keep


class _ExistsFo(_Lazy):
    # subset construction over (body state, placed?) pairs
    def __init__(self, var: str, body, budget: int) -> None:
        super().__init__(budget)
        self.var, self.body = var, body
        self.fv = tuple(v for v in body.fv if v != var)
        self.initial = self.intern(frozenset({(body.initial, False)}))

    def _step(self, s1, s2, lab, env):
        for s in (s1, s2):
            if s == _TRUE or s == _FALSE:
                return s
        inner = dict(env)
        out = set()
        choices = [None, *sorted(lab.B)]
        body = self.body
        for q1, p1 in s1:
            for q2, p2 in s2:
                if p1 and p2:
                    continue
                for c in choices:
                    if c is not None and (p1 or p2):
                        break
                    inner[self.var] = c
                    q = body.step(q1, q2, lab, inner)
                    placed = p1 or p2 or c is not None
                    st = body.status(q)
                    if st is False:
                        continue
                    if st is True and placed:
                        return _TRUE
                    out.add((q, placed))
        if not out:
            return _FALSE
        le = self.body.le
        keep = _maximal([q for q, p in out if not p], le)
        return frozenset([(q, False) for q in keep] + [(q, True) for q in _maximal([q for q, p in out if p], le)])

    def _accept(self, s) -> bool:
        if s == _TRUE or s == _FALSE:
            return s == _TRUE
        return any(p and self.body.is_accepting(q) for q, p in s)

    def _le_objs(self, s1, s2) -> bool:
        le = self.body.le
        return all(any(p == p2 and le(q, q2) for q2, p2 in s2) for q, p in s1)


class _ExistsSet(_Lazy):
    def __init__(self, var: str, body, budget: int) -> None:
        super().__init__(budget)
        self.var, self.body = var, body
        self.fv = tuple(v for v in body.fv if v != var)
        self.initial = self.intern(frozenset({body.initial}))

    def _step(self, s1, s2, lab, env):
        for s in (s1, s2):
            if s == _TRUE or s == _FALSE:
                return s
        inner = dict(env)
        bs = sorted(lab.B)
        subsets = [frozenset(c) for r in range(len(bs) + 1) for c in itertools.combinations(bs, r)]
        out = set()
        body = self.body
        for q1 in s1:
            for q2 in s2:
                for sub in subsets:
                    inner[self.var] = sub
                    q = body.step(q1, q2, lab, inner)
                    st = body.status(q)
                    if st is True:
                        return _TRUE
                    if st is None:
                        out.add(q)
        return frozenset(_maximal(out, self.body.le)) if out else _FALSE

    def _accept(self, s) -> bool:
        if s == _TRUE or s == _FALSE:
            return s == _TRUE
        return any(self.body.is_accepting(q) for q in s)

    def _le_objs(self, s1, s2) -> bool:
        le = self.body.le
        return all(any(le(q, q2) for q2 in s2) for q in s1)


_LEAF = "leaf"
_BAD = "bad"


class ConsistencyAutomaton(_Lazy):
    """Accepts exactly the label trees that describe some graph with colors ``0..width``.

    The state is the ``A`` component at the subtree root.
    """

    def __init__(self, width: int, budget: int = DEFAULT_STATE_BUDGET) -> None:
        super().__init__(budget)
        self.width = width
        self.initial = self.intern(_LEAF)

    def _step(self, s1, s2, lab: SuccinctLabel, env):
        if _BAD in (s1, s2) or not lab.is_well_formed():
            return _BAD
        if any(c > self.width or c < 0 for c in lab.A | lab.B):
            return _BAD
        if (s1 == _LEAF) != (s2 == _LEAF):
            return _BAD
        if s1 != _LEAF:
            bag = lab.A | lab.B
            if not (s1 <= bag and s2 <= bag):
                return _BAD
        return lab.A

    def _accept(self, s) -> bool:
        return s == frozenset()

    def _absorbing(self, s) -> bool | None:
        return False if s == _BAD else None


def _build(f: Formula, budget: int):
    if isinstance(f, EdgeAtom):
        return _EdgeAuto(f.x, f.y, budget)
    if isinstance(f, Eq):
        return _EqAuto(f.x, f.y, budget)
    if isinstance(f, In):
        return _InAuto(f.x, f.X, budget)
    if isinstance(f, Not):
        return _negate(_build(f.body, budget))
    if isinstance(f, BinOp):
        return _BinAuto(f.op, _build(f.left, budget), _build(f.right, budget), budget)
    exists = _ExistsSet if f.is_set else _ExistsFo
    if f.kind.startswith("exists"):
        return exists(f.var, _build(f.body, budget), budget)
    return _NotAuto(exists(f.var, _negate(_build(f.body, budget)), budget))


def _negate(a):
    return a.body if isinstance(a, _NotAuto) else _NotAuto(a)


class CompiledAutomaton:
    """Lazy deterministic automaton for a sentence over width-``w`` succinct labels."""

    def __init__(self, formula: Formula, width: int, budget: int = DEFAULT_STATE_BUDGET) -> None:
        unbound = free_variables(formula)
        if unbound:
            raise UnboundVariable(f"free variables {sorted(unbound)}")
        self.formula = formula
        self.width = width
        self._top = _BinAuto("&", ConsistencyAutomaton(width, budget), _build(formula, budget), budget)
        self.initial = self._top.initial

    @property
    def n_states(self) -> int:
        """States discovered so far."""
        return self._top.n_states

    def step(self, q1: int, q2: int, label) -> int:
        if not isinstance(label, SuccinctLabel):
            raise UnknownLabel(f"{label!r} is not a succinct label")
        return self._top.step(q1, q2, label)

    def is_accepting(self, q: int) -> bool:
        return self._top.is_accepting(q)


def compile_lazy(f: Formula | str, width: int, budget: int = DEFAULT_STATE_BUDGET) -> CompiledAutomaton:
    if isinstance(f, str):
        f = parse_mso(f)
    return CompiledAutomaton(f, width, budget)


def width_alphabet(width: int, limit: int = 200_000) -> list[SuccinctLabel]:
    """Every well-formed label over colors ``0..width``."""
    colors = range(width + 1)
    out: list[SuccinctLabel] = []
    for roles in itertools.product((0, 1, 2), repeat=width + 1):
        A = [c for c in colors if roles[c] == 1]
        B = [c for c in colors if roles[c] == 2]
        bag = A + B
        pairs = [(u, v) for u in bag for v in bag if not (u in A and v in A)]
        if len(out) + 2 ** len(pairs) > limit:
            raise TooLarge(f"width-{width} alphabet has more than {limit} labels")
        for mask in range(2 ** len(pairs)):
            out.append(SuccinctLabel.of(A, B, [p for k, p in enumerate(pairs) if mask >> k & 1]))
    return out


def compile(f: Formula | str, width: int, alphabet: Iterable[SuccinctLabel] | None = None,
            budget: int = DEFAULT_STATE_BUDGET) -> TreeAutomaton:
    """Explicit minimal automaton over ``alphabet`` (default: the full width alphabet)."""
    lazy = compile_lazy(f, width, budget)
    labels = sorted(set(alphabet) if alphabet is not None else width_alphabet(width),
                    key=SuccinctLabel.sort_key)
    return materialize(lazy, labels, budget=budget)

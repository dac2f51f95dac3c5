"""Maximal graph, evolving subgraph and update words.

Edges are directed pairs ``(u, v)`` over vertices ``1..vertex_count``.
Self-loops are allowed and ``(u, v)`` / ``(v, u)`` are distinct edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Union

from .errors import EdgeNotInMaximal, FormatError

Edge = tuple[int, int]


@dataclass(frozen=True)
class MaximalGraph:
    vertex_count: int
    edges: tuple[Edge, ...]
    _index: frozenset[Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be positive")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise ValueError(f"edge {(u, v)} has an endpoint outside 1..{self.vertex_count}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
        object.__setattr__(self, "_index", frozenset(seen))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Edge]) -> "MaximalGraph":
        return cls(vertex_count, tuple((int(u), int(v)) for u, v in edges))

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def __contains__(self, edge: object) -> bool:
        return edge in self._index

    def undirected_adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj


@dataclass(frozen=True)
class SubgraphState:
    graph: MaximalGraph
    present: frozenset[Edge]

    @classmethod
    def empty(cls, graph: MaximalGraph) -> "SubgraphState":
        return cls(graph, frozenset())

    @classmethod
    def full(cls, graph: MaximalGraph) -> "SubgraphState":
        return cls(graph, frozenset(graph.edges))

    def __contains__(self, edge: object) -> bool:
        return edge in self.present


@dataclass(frozen=True)
class UpdateOp:
    kind: Literal["ins", "del"]
    edge: Edge

    def __post_init__(self) -> None:
        if self.kind not in ("ins", "del"):
            raise ValueError(f"unknown update kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind} {self.edge[0]} {self.edge[1]}"


@dataclass(frozen=True)
class UpdateScript:
    ops: tuple[UpdateOp, ...] = ()

    def __iter__(self):
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)


QUERY = "query"
SessionItem = Union[UpdateOp, str]


def apply_update(state: SubgraphState, op: UpdateOp) -> SubgraphState:
    if op.edge not in state.graph:
        raise EdgeNotInMaximal(f"edge {op.edge} is not in the maximal graph")
    if op.kind == "ins":
        present = state.present | {op.edge}
    else:
        present = state.present - {op.edge}
    return SubgraphState(state.graph, present)


def apply_script(state: SubgraphState, script: UpdateScript | Iterable[UpdateOp]) -> SubgraphState:
    # Temporal order: the first listed op is applied first.
    for op in script:
        state = apply_update(state, op)
    return state


def validate_instance(graph: MaximalGraph, state: SubgraphState) -> list[str]:
    """Return the list of violations; an empty list means the instance is ok."""
    errors = []
    for u, v in sorted(state.present):
        if not (1 <= u <= graph.vertex_count and 1 <= v <= graph.vertex_count):
            errors.append(f"edge ({u},{v}): endpoint out of range 1..{graph.vertex_count}")
        elif (u, v) not in graph:
            errors.append(f"edge ({u},{v}): edge not maximal")
    return errors


# ---------------------------------------------------------------------------
# text formats


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str) -> tuple[MaximalGraph, SubgraphState]:
    header = None
    edges: list[Edge] = []
    present: list[tuple[int, Edge]] = []
    for lineno, tok in _data_lines(text):
        try:
            if tok[0] == "p":
                if len(tok) != 4 or tok[1] != "dyngraph":
                    raise FormatError("expected 'p dyngraph <N_V> <M>'", lineno)
                header = (int(tok[2]), int(tok[3]))
            elif tok[0] == "e" and len(tok) == 3:
                edges.append((int(tok[1]), int(tok[2])))
            elif tok[0] == "s" and len(tok) == 3:
                present.append((lineno, (int(tok[1]), int(tok[2]))))
            else:
                raise FormatError(f"unrecognised line {' '.join(tok)!r}", lineno)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
    if header is None:
        raise FormatError("missing 'p dyngraph' header")
    n, m = header
    if m != len(edges):
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    try:
        graph = MaximalGraph.from_edges(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    for lineno, e in present:
        if e not in graph:
            raise FormatError(f"present edge {e} has no matching 'e' line", lineno)
    return graph, SubgraphState(graph, frozenset(e for _, e in present))


def format_graph(graph: MaximalGraph, state: SubgraphState | None = None) -> str:
    lines = [f"p dyngraph {graph.vertex_count} {len(graph.edges)}"]
    lines += [f"e {u} {v}" for u, v in graph.edges]
    if state is not None:
        lines += [f"s {u} {v}" for u, v in graph.edges if (u, v) in state.present]
    return "\n".join(lines) + "\n"


def parse_session(text: str, graph: MaximalGraph | None = None) -> list[SessionItem]:
    """Parse ``ins u v`` / ``del u v`` / ``query`` lines.

    With ``graph`` given, ops on non-maximal edges are rejected here.
    """
    items: list[SessionItem] = []
    for lineno, tok in _data_lines(text):
        if tok == [QUERY]:
            items.append(QUERY)
            continue
        if len(tok) != 3 or tok[0] not in ("ins", "del"):
            raise FormatError(f"unrecognised line {' '.join(tok)!r}", lineno)
        try:
            edge = (int(tok[1]), int(tok[2]))
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if graph is not None and edge not in graph:
            raise FormatError(f"edge {edge} is not in the maximal graph", lineno)
        items.append(UpdateOp(tok[0], edge))  # type: ignore[arg-type]
    return items


def parse_script(text: str, graph: MaximalGraph | None = None) -> UpdateScript:
    return UpdateScript(tuple(i for i in parse_session(text, graph) if isinstance(i, UpdateOp)))

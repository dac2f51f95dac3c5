"""Dynamic model checking: precompute once, then answer each edge update with
one neutral-edge swap in the leveled Dyck graph and a bounded relational
update of Delta.

``Engine.init`` runs the precomputation steps:

1. decomposition (heuristic or supplied), binarized and balanced
2. automaton (compiled from MSO or supplied)
3. coloring, succinct labels, post order and progression
4. the leveled Dyck graph for the initial subgraph
6. edge -> level and (edge, label, kind) -> label maps
7. Delta

There is no step 5; the numbering follows the usual description of the
pipeline so error messages stay comparable.
"""

from __future__ import annotations

import logging
import os
import statistics
import time
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .automaton import Automaton, LabeledTree, TreeAutomaton, accepts
from .dyckgraph import TOP, EdgeMaps, GammaGraph, build_gamma, context_classes, gamma_swap, swap_to_label
from .dyckreach import DeltaRelation, init_delta, query_reach
from .errors import (DynMsoError, EdgeNotInMaximal, EngineError, InvalidDecomposition,
                     OracleDisagreement, WidthCapExceeded)
from .graph import MaximalGraph, SubgraphState, UpdateOp, apply_update, validate_instance
from .mso import FORMULA_TYPES, Formula, brute_force_eval, compile_lazy, parse_mso
from .treedec import (BalanceConfig, SuccinctLabel, TreeDecomposition, binarize_and_balance,
                      bottom_up_progression, decomposition_violations, heuristic_decomposition,
                      intro_node_map, proper_coloring, realizable_labels, succinct_labels)

log = logging.getLogger("dynmso")

ORACLE_MODES = ("none", "automaton", "brute", "full-recompute", "all")


@dataclass(frozen=True)
class EngineConfig:
    kappa_cap: int = 8             # max width of the (unbalanced) decomposition
    balance_c: float = 4.0
    width_cap: int = 64
    label_budget: int = 16
    state_budget: int = 20_000
    max_gamma_vertices: int = 2_000_000
    restrict_reachable: bool = True
    reduce_states: bool = True
    oracle: str = "none"
    brute_cap: int = 8

    def __post_init__(self) -> None:
        for name in ("kappa_cap", "width_cap", "label_budget", "state_budget", "max_gamma_vertices"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.oracle not in ORACLE_MODES:
            raise ValueError(f"unknown oracle mode {self.oracle!r}")


@dataclass
class UpdateStats:
    op: str
    level: int
    mutations: int
    passes: int
    seconds: float


@dataclass
class OracleReport:
    verdict: bool
    checks: dict = field(default_factory=dict)  # mode -> (value, seconds)

    @property
    def agree(self) -> bool:
        return all(v == self.verdict for v, _ in self.checks.values())


def _step(n: int):
    class _Wrap:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, Exception) and not isinstance(exc, EngineError):
                raise EngineError(n, exc) from exc
            return False
    return _Wrap()


class Engine:
    """Holds the auxiliary structure; ``update`` is the only mutator."""

    def __init__(self) -> None:  # use Engine.init / Engine.from_labeled_tree
        self.cfg = EngineConfig()
        self.graph: MaximalGraph | None = None
        self.state: SubgraphState | None = None
        self.formula: Formula | None = None
        self.decomposition: TreeDecomposition | None = None
        self.chi: dict = {}
        self.automaton: Automaton | None = None
        self.gamma: GammaGraph | None = None
        self.delta: DeltaRelation | None = None
        self.maps: EdgeMaps | None = None
        self.history: list[UpdateStats] = []
        self.timings: dict[str, float] = {}

    # ------------------------------------------------------------------ init
    @classmethod
    def init(cls, graph: MaximalGraph, state: SubgraphState, phi: Formula | str | Automaton,
             cfg: EngineConfig = EngineConfig(), decomposition: TreeDecomposition | None = None,
             coloring: Mapping[int, int] | None = None) -> "Engine":
        self = cls()
        self.cfg = cfg
        self.graph = graph
        self.state = state
        t = time.perf_counter()

        def lap(name: str) -> None:
            nonlocal t
            now = time.perf_counter()
            self.timings[name] = now - t
            t = now

        with _step(0):
            problems = validate_instance(graph, state)
            if problems:
                raise InvalidDecomposition(problems)
        with _step(1):
            if decomposition is None:
                d = heuristic_decomposition(graph)
            else:
                bad = decomposition_violations(graph, decomposition)
                if bad:
                    raise InvalidDecomposition(bad)
                d = decomposition
            if d.width > cfg.kappa_cap:
                raise WidthCapExceeded(f"decomposition width {d.width} exceeds cap {cfg.kappa_cap}")
            if not (decomposition is not None and d.is_binary()):
                d = binarize_and_balance(d, BalanceConfig(c=cfg.balance_c, width_cap=cfg.width_cap))
            self.decomposition = d
            lap("decompose")
        with _step(2):
            if isinstance(phi, (str, *FORMULA_TYPES)):
                self.formula = parse_mso(phi) if isinstance(phi, str) else phi
                self.automaton = compile_lazy(self.formula, max(d.width, 0), cfg.state_budget)
            else:
                self.automaton = phi
                colors = [c for lab in getattr(phi, "alphabet", ()) if isinstance(lab, SuccinctLabel)
                          for c in lab.A | lab.B]
                if colors and max(colors) < d.width:
                    raise WidthCapExceeded(f"automaton covers width {max(colors)}, "
                                           f"decomposition has width {d.width}")
            lap("automaton")
        with _step(3):
            self.chi = dict(coloring) if coloring is not None else proper_coloring(d)
            labels = succinct_labels(d, self.chi, state.present)
            prog = bottom_up_progression(d)
            intro = intro_node_map(d, graph.edges)
            label_sets = {n: realizable_labels(d, self.chi, graph, n, cfg.label_budget) for n in d.bags}
            tree = LabeledTree.from_decomposition(d, labels)
            lap("label")
        with _step(4):
            canon = None
            if cfg.reduce_states and cfg.restrict_reachable:
                canon = context_classes(self.automaton, tree, label_sets, prog)
            self.gamma = build_gamma(self.automaton, tree, label_sets, prog,
                                     restrict_reachable=cfg.restrict_reachable,
                                     max_vertices=cfg.max_gamma_vertices, canon=canon)
            lap("gamma")
        with _step(6):
            levels = {e: prog.posti[n] for e, n in intro.items()}
            self.maps = EdgeMaps.build(self.gamma, graph.edges, levels, self.chi)
            lap("maps")
        with _step(7):
            self.delta = init_delta(self.gamma)
            lap("delta")
        log.info("init: %d tree nodes, width %d, %d gamma vertices, delta support %d",
                 len(d), d.width, self.gamma.vertex_count(), self.delta.support_size())
        return self

    @classmethod
    def from_labeled_tree(cls, automaton: Automaton, tree: LabeledTree,
                          label_sets: Mapping[Hashable, Sequence] | None = None,
                          cfg: EngineConfig = EngineConfig()) -> "Engine":
        """Skip steps 1-3: run directly on a labeled tree (labels may be opaque)."""
        self = cls()
        self.cfg = cfg
        self.automaton = automaton
        if label_sets is None:
            alphabet = getattr(automaton, "alphabet", None)
            if alphabet is None:
                raise ValueError("label_sets are required for automata without an alphabet")
            label_sets = {n: tuple(alphabet) for n in tree.children}
        try:
            self.gamma = build_gamma(automaton, tree, label_sets,
                                     restrict_reachable=cfg.restrict_reachable,
                                     max_vertices=cfg.max_gamma_vertices)
        except DynMsoError as exc:
            raise EngineError(4, exc) from exc
        self.delta = init_delta(self.gamma)
        return self

    # ---------------------------------------------------------------- queries
    def decide(self) -> bool:
        return query_reach(self.delta, self.gamma.source, TOP)

    def current_tree(self) -> LabeledTree:
        g = self.gamma
        return LabeledTree(g.tree.root, g.tree.children, g.current_labels())

    # ---------------------------------------------------------------- updates
    def update(self, op: UpdateOp) -> bool:
        """Apply ``op``; returns the new verdict. State is unchanged if this raises."""
        if self.graph is None:
            raise EngineError(0, ValueError("engine was built from a labeled tree; use relabel"))
        if op.edge not in self.graph:
            raise EdgeNotInMaximal(f"edge {op.edge} is not in the maximal graph")
        t = time.perf_counter()
        before = self.delta.passes
        e1, e2 = self._swap_edge(op)
        self.delta.apply_swap(e1, e2)
        old_state = self.state
        self.state = apply_update(self.state, op)
        stats = UpdateStats(str(op), e1[0].level, 0 if e1 == e2 else 2,
                            self.delta.passes - before, time.perf_counter() - t)
        self.history.append(stats)
        if log.isEnabledFor(logging.DEBUG):
            log.debug("%s: level %d, %d mutations, %d passes, %d gamma vertices, delta support %d",
                      op, stats.level, stats.mutations, stats.passes,
                      self.gamma.vertex_count(), self.delta.support_size())
        if self.cfg.oracle != "none":
            try:
                self.oracle_check()
            except OracleDisagreement:
                # roll back through the inverse swap
                self.delta.apply_swap(*swap_to_label(self.gamma, e1[0].level, e1[2].label))
                self.state = old_state
                self.history.pop()
                raise
        return self.decide()

    def _swap_edge(self, op: UpdateOp):
        return gamma_swap(self.gamma, op.edge, op.kind, self.maps)

    def relabel(self, node: Hashable, label) -> bool:
        """Set one node's label directly (labeled-tree mode)."""
        j = self.gamma.prog.posti[node] - 1
        e1, e2 = swap_to_label(self.gamma, j, label)
        self.delta.apply_swap(e1, e2)
        return self.decide()

    # ---------------------------------------------------------------- oracles
    def instance(self) -> dict:
        out: dict = {"decomposition": None}
        if self.graph is not None:
            from .graph import format_graph
            out["graph"] = format_graph(self.graph, self.state)
            out["formula"] = None if self.formula is None else str(self.formula)
        out["labels"] = {str(k): str(v) for k, v in self.gamma.current_labels().items()}
        return out

    def oracle_check(self, mode: str | None = None) -> OracleReport:
        mode = mode or self.cfg.oracle
        modes = ("automaton", "brute", "full-recompute") if mode == "all" else (mode,)
        report = OracleReport(self.decide())
        for m in modes:
            t = time.perf_counter()
            if m == "automaton":
                value = accepts(self.automaton, self.current_tree())
            elif m == "brute":
                if self.formula is None or self.graph is None or self.graph.vertex_count > self.cfg.brute_cap:
                    continue
                value = brute_force_eval(self.formula, self.graph.vertices, self.state.present)
            elif m == "full-recompute":
                fresh = init_delta(self.gamma)
                if fresh.snapshot() != self.delta.snapshot():
                    raise OracleDisagreement("maintained Delta differs from a fresh computation",
                                             self.instance())
                value = query_reach(fresh, self.gamma.source, TOP)
            else:
                raise ValueError(f"unknown oracle mode {m!r}")
            report.checks[m] = (value, time.perf_counter() - t)
        if not report.agree:
            raise OracleDisagreement(
                f"decide={report.verdict} but " + ", ".join(f"{m}={v}" for m, (v, _) in report.checks.items()),
                self.instance())
        return report


# ---------------------------------------------------------------------- bench


@dataclass
class BenchRow:
    op: str
    dynamic_seconds: float
    recompute_seconds: float
    passes: int
    mutations: int


@dataclass
class BenchReport:
    vertex_count: int
    gamma_vertices: int
    delta_support: int
    rows: list[BenchRow] = field(default_factory=list)

    @property
    def mean_dynamic(self) -> float:
        return statistics.fmean(r.dynamic_seconds for r in self.rows) if self.rows else 0.0

    @property
    def mean_recompute(self) -> float:
        return statistics.fmean(r.recompute_seconds for r in self.rows) if self.rows else 0.0

    @property
    def ratio(self) -> float:
        return self.mean_dynamic / self.mean_recompute if self.rows else 0.0

    @property
    def pass_counts(self) -> set[int]:
        return {r.passes for r in self.rows if r.mutations}

    def lines(self) -> list[str]:
        out = [f"update {k} {r.op.replace(' ', ':')} dynamic={r.dynamic_seconds:.6g} "
               f"recompute={r.recompute_seconds:.6g} passes={r.passes} mutations={r.mutations}"
               for k, r in enumerate(self.rows)]
        out.append(f"summary n_v={self.vertex_count} updates={len(self.rows)} "
                   f"gamma_vertices={self.gamma_vertices} delta_support={self.delta_support} "
                   f"mean_dynamic={self.mean_dynamic:.6g} mean_recompute={self.mean_recompute:.6g} "
                   f"ratio={self.ratio:.6g}")
        return out


def bench(engine: Engine, script: Sequence[UpdateOp], repetitions: int = 3) -> BenchReport:
    """Time each update against rebuilding Delta from scratch (best of ``repetitions``)."""
    report = BenchReport(engine.graph.vertex_count if engine.graph else 0,
                         engine.gamma.vertex_count(), engine.delta.support_size())
    for op in script:
        dyn = []
        undo = UpdateOp("del" if op.kind == "ins" else "ins", op.edge)
        was = op.edge in engine.state.present
        for r in range(repetitions):
            t = time.perf_counter()
            engine.update(op)
            dyn.append(time.perf_counter() - t)
            stats = engine.history[-1]
            if r < repetitions - 1 and (op.edge in engine.state.present) != was:
                engine.update(undo)
        rec = []
        for _ in range(repetitions):
            t = time.perf_counter()
            init_delta(engine.gamma)
            rec.append(time.perf_counter() - t)
        report.rows.append(BenchRow(str(op), min(dyn), min(rec), stats.passes, stats.mutations))
    report.delta_support = engine.delta.support_size()
    return report


def configure_logging() -> None:
    level = os.environ.get("DYNMSO_LOG", "quiet").lower()
    levels = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING), format="%(levelname)s %(message)s")

"""Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal summary)
or ``python tests/test_acceptance.py`` (lines go to stdout).
"""

import contextlib
import random
import time

import pytest

from dynmso.automaton import LabeledTree, accepts, run, state_progression
from dynmso.corpus import (CORPUS, GraphGen, decomposition_variants, path_sweep, random_script)
from dynmso.dyckgraph import Anchor, build_gamma, swap_to_label
from dynmso.dyckreach import LabeledDag, brute_force_delta, init_delta, random_gamma, random_swap
from dynmso.engine import Engine, EngineConfig
from dynmso.errors import EngineError, WidthCapExceeded
from dynmso.fixtures import (GOLDEN_COLORING, GOLDEN_LABELS, GOLDEN_POSTI, GOLDEN_SETS, GOLDEN_RUN, golden_decomposition,
                             golden_graph, golden_state, golden_automaton, golden_tree)
from dynmso.mso import brute_force_eval, compile, compile_lazy, parse_mso
from dynmso.treedec import (BalanceConfig, SuccinctLabel, binarize, binarize_and_balance,
                            bottom_up_progression, decomposition_violations, heuristic_decomposition,
                            post_order, progression_violations, realizable_labels, succinct_labels)

# criterion 1
C1_MAX_SECONDS = 1.0
# criterion 2
C2_GRAPHS = 200
C2_MAX_VERTICES = 8
C2_MAX_WIDTH = 3
C2_VARIANTS = 3
C2_MAX_SECONDS = 600.0
C2_GEN = GraphGen(max_vertices=C2_MAX_VERTICES, parents=4, extra=0.5, present=0.7)
# criteria 3 and 5
C3_EPISODES = 500
C3_MAX_VERTICES = 20
C3_MAX_WIDTH = 3
C3_MAX_UPDATES = 50
C3_BRUTE_VERTICES = 8
C5_FULL_DIFF_VERTICES = 3000   # compare whole edge sets when Gamma is at most this big
# criterion 4
C4_SWAPS = 1000
C4_ENUM_VERTICES = 40
C4_LARGE_SWAPS = 300
C4_LARGE_VERTICES = 150
C4_PATH_LIMIT = 200_000         # resource guard for the path enumerator
# criterion 6
C6_INPUTS = 100
C6_MAX_VERTICES = 30
# criterion 7
C7_SIZES = (16, 32, 64, 128)
C7_UPDATES = 200
C7_REPETITIONS = 5

RESULTS: dict[int, str] = {}


@contextlib.contextmanager
def criterion(n: int, title: str):
    info: dict = {}
    try:
        yield info
    except BaseException as exc:
        RESULTS[n] = f"criterion {n} FAIL {title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        raise
    else:
        RESULTS[n] = f"criterion {n} PASS {title}: " + ", ".join(f"{k}={v}" for k, v in info.items())


def test_criterion_1_golden_fixtures():
    with criterion(1, "golden fixtures") as info:
        t0 = time.perf_counter()
        d = golden_decomposition()
        labels = succinct_labels(d, GOLDEN_COLORING, golden_state().present)
        assert labels == GOLDEN_LABELS
        assert labels["b"] == SuccinctLabel.of({1, 2}, {0}, {(0, 0), (0, 2), (1, 0)})
        assert labels["a"] == SuccinctLabel.of((), {0, 1, 2}, {(0, 1), (1, 0), (2, 0)})
        assert post_order(d) == GOLDEN_POSTI
        prog = bottom_up_progression(d)
        assert len(prog.sets) == 8 and [set(s) for s in prog.sets] == GOLDEN_SETS
        a, t = golden_automaton(), golden_tree()
        rho = run(a, t)
        assert rho == GOLDEN_RUN
        seq = state_progression(a, t, prog)
        assert seq == [{n: GOLDEN_RUN[n] for n in s} for s in GOLDEN_SETS]
        assert {n: a.names[q] for n, q in seq[4].items()} == {"b": "q1", "d": "q1"}
        assert not accepts(a, t)
        elapsed = time.perf_counter() - t0
        assert elapsed < C1_MAX_SECONDS
        info.update(labels=7, sets=8, seconds=f"{elapsed:.3f}<{C1_MAX_SECONDS}")


def test_criterion_2_compiled_matches_brute_force():
    with criterion(2, "compiled automaton = brute force") as info:
        t0 = time.perf_counter()
        rng = random.Random(2)
        phis = [parse_mso(s) for s in CORPUS]
        autos: dict = {}
        graphs = checks = mismatches = 0
        while graphs < C2_GRAPHS:
            g = C2_GEN.graph(rng)
            if heuristic_decomposition(g).width > C2_MAX_WIDTH:
                continue
            graphs += 1
            s = C2_GEN.state(rng, g)
            variants = decomposition_variants(g, rng, C2_VARIANTS)
            assert len(variants) >= 3
            for d, chi in variants:
                assert not decomposition_violations(g, d)
                tree = LabeledTree.from_decomposition(d, succinct_labels(d, chi, s.present))
                for i, phi in enumerate(phis):
                    a = autos.setdefault((i, d.width), compile_lazy(phi, d.width))
                    checks += 1
                    mismatches += accepts(a, tree) != brute_force_eval(phi, g.vertices, s.present)
        elapsed = time.perf_counter() - t0
        assert len(CORPUS) >= 6
        assert mismatches == 0, f"{mismatches} of {checks} verdicts differ"
        assert elapsed < C2_MAX_SECONDS
        info.update(graphs=graphs, sentences=len(CORPUS), checks=checks, mismatches=0,
                    seconds=f"{elapsed:.1f}<{C2_MAX_SECONDS:.0f}")


@pytest.fixture(scope="module")
def episodes():
    """Run the criterion-3 episodes once; criterion 5 reads the same log."""
    rng = random.Random(3)
    gen = GraphGen(max_vertices=C3_MAX_VERTICES)
    log = {"episodes": 0, "updates": 0, "automaton_checks": 0, "brute_checks": 0, "mismatches": [],
           "shape_errors": [], "self_swaps": 0, "real_swaps": 0, "full_diffs": 0, "skipped": 0}
    phis = [parse_mso(s) for s in CORPUS]
    while log["episodes"] < C3_EPISODES:
        g = gen.graph(rng)
        state = gen.state(rng, g)
        fi = rng.randrange(len(CORPUS))
        try:
            eng = Engine.init(g, state, CORPUS[fi], EngineConfig(kappa_cap=C3_MAX_WIDTH))
        except EngineError as exc:
            if isinstance(exc.cause, WidthCapExceeded):
                log["skipped"] += 1
                continue
            raise
        log["episodes"] += 1
        brute = g.vertex_count <= C3_BRUTE_VERTICES
        for op in random_script(rng, g, rng.randint(1, C3_MAX_UPDATES)):
            gam = eng.gamma
            before_labels = list(gam.current)
            small = gam.vertex_count() <= C5_FULL_DIFF_VERTICES
            before_edges = gam.edge_set() if small else None
            verdict = eng.update(op)
            log["updates"] += 1
            # criterion 3
            log["automaton_checks"] += 1
            if verdict != accepts(eng.automaton, eng.current_tree()):
                log["mismatches"].append((g, fi, op, "automaton"))
            if brute:
                log["brute_checks"] += 1
                if verdict != brute_force_eval(phis[fi], g.vertices, eng.state.present):
                    log["mismatches"].append((g, fi, op, "brute"))
            # criterion 5
            mutations = eng.history[-1].mutations
            moved = [j for j, (x, y) in enumerate(zip(before_labels, gam.current)) if x != y]
            if mutations not in (0, 2) or len(moved) != mutations // 2:
                log["shape_errors"].append((op, mutations, moved))
            log["self_swaps" if mutations == 0 else "real_swaps"] += 1
            if small:
                log["full_diffs"] += 1
                diff = before_edges ^ gam.edge_set()
                anchors = {s for s, _, _ in diff}
                if len(diff) != mutations or (diff and (len(anchors) != 1 or not isinstance(anchors.pop(), Anchor))):
                    log["shape_errors"].append((op, mutations, sorted(map(str, diff))))
    return log


@pytest.mark.slow
def test_criterion_3_dynamic_correctness(episodes):
    with criterion(3, "end-to-end dynamic correctness") as info:
        log = episodes
        assert log["episodes"] >= C3_EPISODES
        assert not log["mismatches"], f"{len(log['mismatches'])} disagreements, first {log['mismatches'][0]}"
        info.update(episodes=log["episodes"], updates=log["updates"], automaton_checks=log["automaton_checks"],
                    brute_checks=log["brute_checks"], mismatches=0, over_width_skipped=log["skipped"])


@pytest.mark.slow
def test_criterion_4_delta_maintenance():
    with criterion(4, "Delta maintenance vs recomputation") as info:
        rng = random.Random(4)
        real = self_swaps = enumerated = large = 0
        while real < C4_SWAPS:
            inst = random_gamma(rng, max_vertices=C4_ENUM_VERTICES)
            g = inst.gamma
            delta = init_delta(g)
            for _ in range(rng.randint(1, 8)):
                e1, e2 = swap_to_label(g, *random_swap(inst, rng))
                delta.apply_swap(e1, e2)
                real, self_swaps = (real + 1, self_swaps) if e1 != e2 else (real, self_swaps + 1)
                got = delta.tuples()
                assert got == init_delta(g).tuples()
                assert got == brute_force_delta(LabeledDag.from_gamma(g), C4_PATH_LIMIT)
                enumerated += 1
        while large < C4_LARGE_SWAPS:
            inst = random_gamma(rng, max_vertices=C4_LARGE_VERTICES)
            g = inst.gamma
            delta = init_delta(g)
            for _ in range(5):
                delta.apply_swap(*swap_to_label(g, *random_swap(inst, rng)))
                assert delta.tuples() == init_delta(g).tuples()
                large += 1
        info.update(swaps=real, self_swaps=self_swaps, brute_compared=enumerated,
                    larger_instances_swaps=large, mismatches=0)


@pytest.mark.slow
def test_criterion_5_update_shape(episodes):
    with criterion(5, "two-edge update shape") as info:
        log = episodes
        assert not log["shape_errors"], f"{len(log['shape_errors'])} bad updates, first {log['shape_errors'][0]}"
        assert log["real_swaps"] > 0
        info.update(updates=log["updates"], two_edge=log["real_swaps"], zero_edge=log["self_swaps"],
                    full_edge_set_diffs=log["full_diffs"])


def test_criterion_6_structural_bounds():
    with criterion(6, "structural bounds") as info:
        rng = random.Random(6)
        gen = GraphGen(max_vertices=C6_MAX_VERTICES)
        cfg = BalanceConfig()
        built = 0
        for k in range(C6_INPUTS):
            g = gen.graph(rng)
            d = heuristic_decomposition(g)
            for b in (binarize(d), binarize_and_balance(d, cfg),
                      binarize_and_balance(d, BalanceConfig(force=True))):
                assert not decomposition_violations(g, b)
                assert progression_violations(b) == []
                built += 1
            b = binarize_and_balance(d, cfg)
            assert b.width <= 3 * d.width + 2
            assert len(b) <= 2 * g.vertex_count
            assert b.height() <= cfg.height_bound(g.vertex_count)
        assert progression_violations(golden_decomposition()) == []
        # nominal vertices in the unrestricted construction
        t = golden_tree()
        g3 = build_gamma(golden_automaton(), t, {n: (0, 1) for n in t.children}, restrict_reachable=False)
        assert g3.nominal_count() == 1 + sum(2 ** len(s) for s in g3.prog.sets[1:])
        d = golden_decomposition()
        table = compile("exists x. edge(x,x)", 2)
        sets = {n: realizable_labels(d, GOLDEN_COLORING, golden_graph(), n) for n in d.bags}
        tree = LabeledTree.from_decomposition(d, GOLDEN_LABELS)
        g1 = build_gamma(table, tree, sets, restrict_reachable=False)
        q = table.n_states
        assert g1.nominal_count() == 1 + sum(q ** len(s) for s in g1.prog.sets[1:])
        info.update(inputs=C6_INPUTS, decompositions_checked=built, tree_nominals=g3.nominal_count(),
                    graph_nominals=g1.nominal_count(), graph_states=q)


def test_criterion_7_update_discipline():
    with criterion(7, "update-discipline instrumentation") as info:
        reports = path_sweep(C7_SIZES, C7_UPDATES, C7_REPETITIONS)
        counts = [reports[n].pass_counts for n in C7_SIZES]
        assert all(len(c) == 1 for c in counts) and len(set.union(*counts)) == 1, counts
        top = reports[C7_SIZES[-1]]
        assert top.mean_dynamic < top.mean_recompute
        ratios = [reports[n].ratio for n in C7_SIZES]
        assert all(a >= b for a, b in zip(ratios, ratios[1:])), ratios
        info.update(passes=counts[0].pop(), ratios="/".join(f"{r:.4f}" for r in ratios),
                    dynamic_128=f"{top.mean_dynamic:.2e}", recompute_128=f"{top.mean_recompute:.2e}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

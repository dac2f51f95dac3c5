"""Command-line entry point: ``dynmso <command> ...``.

Exit codes: 0 for success / a true verdict, 1 for a false verdict or a failed
selftest, 2 for any error (one diagnostic line on stderr).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO

from . import fixtures
from .automaton import format_automaton, parse_automaton, run, state_progression
from .dyckgraph import dump_gamma
from .engine import ORACLE_MODES, Engine, EngineConfig, bench, configure_logging, log
from .errors import DynMsoError, FormatError
from .graph import QUERY, UpdateOp, parse_graph, parse_session
from .mso import compile as compile_formula
from .mso import parse_mso
from .treedec import (BalanceConfig, binarize_and_balance, bottom_up_progression, format_decomposition,
                      heuristic_decomposition, parse_decomposition, succinct_labels)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _formula_text(arg: str) -> str:
    # a path to a formula file, or the formula itself
    return _read(arg) if arg == "-" or os.path.isfile(arg) else arg


def _engine(args, oracle: str = "none") -> Engine:
    graph, state = parse_graph(_read(args.graph))
    d = parse_decomposition(_read(args.decomposition)) if args.decomposition else None
    if args.formula is not None:
        phi = parse_mso(_formula_text(args.formula))
    else:
        phi = parse_automaton(_read(args.automaton))
    cfg = EngineConfig(kappa_cap=args.kappa_cap, oracle=oracle,
                       restrict_reachable=getattr(args, "restrict_reachable", True))
    return Engine.init(graph, state, phi, cfg, decomposition=d)


def _verdict(v: bool) -> str:
    return "true" if v else "false"


# ------------------------------------------------------------------ commands


def cmd_decompose(args) -> int:
    graph, _ = parse_graph(_read(args.graph))
    d = heuristic_decomposition(graph)
    d = binarize_and_balance(d, BalanceConfig(c=args.balance_c))
    _write(args.output, format_decomposition(d))
    return 0


def cmd_compile(args) -> int:
    a = compile_formula(_formula_text(args.formula), args.width, budget=args.budget)
    _write(args.output, format_automaton(a))
    return 0


def cmd_check(args) -> int:
    v = _engine(args).decide()
    print(_verdict(v))
    return 0 if v else 1


def _session_lines(src: TextIO) -> Iterator[str]:
    # one line at a time so each verdict goes out before the next line is read
    while True:
        line = src.readline()
        if not line:
            return
        yield line


def cmd_session(args) -> int:
    eng = _engine(args, args.oracle)
    verdict = eng.decide()
    src = sys.stdin if args.updates == "-" else open(args.updates)
    try:
        for lineno, line in enumerate(_session_lines(src), start=1):
            try:
                items = parse_session(line, eng.graph)
            except FormatError as exc:
                raise FormatError(str(exc).split(": ", 1)[-1], lineno) from None
            for item in items:
                if item == QUERY:
                    verdict = eng.decide()
                    print(_verdict(verdict), flush=True)
                else:
                    verdict = eng.update(item)
                    if os.environ.get("DYNMSO_LOG", "").lower() == "debug":
                        log.debug("gamma after %s:\n%s", item, dump_gamma(eng.gamma))
    finally:
        if src is not sys.stdin:
            src.close()
    return 0 if verdict else 1


def cmd_bench(args) -> int:
    eng = _engine(args)
    script = [i for i in parse_session(_read(args.updates), eng.graph) if isinstance(i, UpdateOp)]
    report = bench(eng, script, args.repetitions)
    for line in report.lines():
        print(line)
    return 0


def selftest_checks() -> list[tuple[str, bool]]:
    """Golden checks on the hand-made eight-vertex instance."""
    d = fixtures.golden_decomposition()
    labels = succinct_labels(d, fixtures.GOLDEN_COLORING, fixtures.golden_state().present)
    prog = bottom_up_progression(d)
    a, t = fixtures.golden_automaton(), fixtures.golden_tree()
    rho = run(a, t)
    prog_states = state_progression(a, t, prog)
    expected_prog = [{n: fixtures.GOLDEN_RUN[n] for n in s} for s in fixtures.GOLDEN_SETS]
    checks = [
        ("succinct labels", labels == fixtures.GOLDEN_LABELS),
        ("post indices", prog.posti == fixtures.GOLDEN_POSTI),
        ("progression sets", [set(s) for s in prog.sets] == fixtures.GOLDEN_SETS),
        ("run", rho == fixtures.GOLDEN_RUN),
        ("state progression", prog_states == expected_prog),
        ("rejection", not a.is_accepting(rho[t.root])),
    ]
    eng = Engine.init(fixtures.golden_graph(), fixtures.golden_state(), "exists x. edge(x,x)",
                      decomposition=d, coloring=fixtures.GOLDEN_COLORING)
    seq = [eng.decide(), eng.update(UpdateOp("del", (1, 1))), eng.update(UpdateOp("ins", (1, 1)))]
    checks.append(("dynamic self-loop", seq == [True, False, True]))
    return checks


def cmd_selftest(args) -> int:
    ok = True
    for name, passed in selftest_checks():
        print(f"{'ok' if passed else 'FAIL'} {name}")
        ok &= passed
    return 0 if ok else 1


# -------------------------------------------------------------------- parser


def _instance_args(p: argparse.ArgumentParser, updates: bool) -> None:
    p.add_argument("-g", "--graph", required=True, help="graph file ('p dyngraph' format)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("-f", "--formula", help="MSO sentence, or a file holding one")
    src.add_argument("-a", "--automaton", help="automaton file written by 'compile'")
    p.add_argument("-d", "--decomposition", help="decomposition file to use instead of the heuristic")
    p.add_argument("--kappa-cap", type=int, default=EngineConfig.kappa_cap)
    if updates:
        p.add_argument("-u", "--updates", required=True, help="update script, '-' for stdin")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynmso", description="Dynamic MSO model checking on bounded-treewidth graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="emit a binary balanced tree decomposition")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--balance-c", type=float, default=BalanceConfig.c)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compile", help="compile a sentence to an explicit minimal automaton")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--budget", type=int, default=EngineConfig.state_budget)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("check", help="static verdict for one instance")
    _instance_args(p, updates=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("session", help="stream verdicts for an update script")
    _instance_args(p, updates=True)
    p.add_argument("--oracle", choices=ORACLE_MODES, default="none")
    p.add_argument("--restrict-reachable", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("bench", help="time dynamic updates against recomputing Delta")
    _instance_args(p, updates=True)
    p.add_argument("--repetitions", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="golden checks on the built-in eight-vertex instance")
    p.set_defaults(func=cmd_selftest)
    return ap


def _validate(args) -> None:
    for name in ("width", "budget", "kappa_cap", "repetitions"):
        v = getattr(args, name, None)
        if v is not None and (v < 0 if name == "width" else v <= 0):
            raise ValueError(f"--{name.replace('_', '-')} must be {'non-negative' if name == 'width' else 'positive'}")
    if getattr(args, "balance_c", 1.0) <= 0:
        raise ValueError("--balance-c must be positive")


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except (DynMsoError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"dynmso {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

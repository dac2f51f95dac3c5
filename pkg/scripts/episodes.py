"""Random dynamic episodes with every oracle switched on; reports slow instances."""

import argparse
import random
import time

from dynmso.corpus import CORPUS, GraphGen, random_script
from dynmso.engine import Engine, EngineConfig
from dynmso.errors import EngineError, WidthCapExceeded


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--episodes", type=int, default=100)
    ap.add_argument("--max-vertices", type=int, default=20)
    ap.add_argument("--max-width", type=int, default=3)
    ap.add_argument("--max-updates", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--slow", type=float, default=5.0, help="report episodes slower than this (seconds)")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    gen = GraphGen(max_vertices=args.max_vertices)
    done = updates = 0
    t0 = time.perf_counter()
    while done < args.episodes:
        g = gen.graph(rng)
        state = gen.state(rng, g)
        fi = rng.randrange(len(CORPUS))
        oracle = "all" if g.vertex_count <= 8 else "automaton"
        t = time.perf_counter()
        try:
            eng = Engine.init(g, state, CORPUS[fi], EngineConfig(kappa_cap=args.max_width, oracle=oracle))
        except EngineError as exc:
            if isinstance(exc.cause, WidthCapExceeded):
                continue
            raise
        eng.oracle_check()
        for op in random_script(rng, g, rng.randint(1, args.max_updates)):
            eng.update(op)  # raises OracleDisagreement on any mismatch
            updates += 1
        done += 1
        dt = time.perf_counter() - t
        if dt > args.slow:
            print(f"slow episode {done}: n_v={g.vertex_count} formula={fi} {dt:.1f}s "
                  f"gamma={eng.gamma.vertex_count()}")
    print(f"{done} episodes, {updates} updates, all oracles agree, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

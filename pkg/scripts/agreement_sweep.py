"""Compare compiled-automaton verdicts with brute-force MSO evaluation on random small graphs."""

import argparse
import random
import time

from dynmso.automaton import LabeledTree, accepts
from dynmso.corpus import CORPUS, GraphGen, decomposition_variants
from dynmso.mso import brute_force_eval, compile_lazy, parse_mso
from dynmso.treedec import heuristic_decomposition, succinct_labels


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", type=int, default=200)
    ap.add_argument("--max-vertices", type=int, default=8)
    ap.add_argument("--max-width", type=int, default=3)
    ap.add_argument("--variants", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-f", "--formula", action="append", help="sentence to add (default: the built-in corpus)")
    args = ap.parse_args()
    gen = GraphGen(max_vertices=args.max_vertices, parents=4, extra=0.5, present=0.7)
    texts = args.formula or list(CORPUS)
    phis = [parse_mso(t) for t in texts]
    rng = random.Random(args.seed)
    autos: dict = {}
    stats = {t: [0, 0] for t in texts}
    t0 = time.perf_counter()
    done = 0
    while done < args.graphs:
        g = gen.graph(rng)
        if heuristic_decomposition(g).width > args.max_width:
            continue
        done += 1
        s = gen.state(rng, g)
        for d, chi in decomposition_variants(g, rng, args.variants):
            tree = LabeledTree.from_decomposition(d, succinct_labels(d, chi, s.present))
            for text, phi in zip(texts, phis):
                a = autos.setdefault((text, d.width), compile_lazy(phi, d.width))
                stats[text][0] += 1
                if accepts(a, tree) != brute_force_eval(phi, g.vertices, s.present):
                    stats[text][1] += 1
                    print(f"MISMATCH {text!r} n={g.vertex_count} present={sorted(s.present)}")
    for text, (n, bad) in stats.items():
        print(f"{n:>6} checks {bad:>3} mismatches  {text}")
    print(f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

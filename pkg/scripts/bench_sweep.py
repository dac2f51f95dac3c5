"""Time dynamic updates against rebuilding Delta on growing path graphs."""

import argparse

from dynmso.corpus import SELF_LOOP, path_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--updates", type=int, default=200)
    ap.add_argument("--repetitions", type=int, default=5)
    ap.add_argument("--formula", default=SELF_LOOP)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    reports = path_sweep(tuple(args.sizes), args.updates, args.repetitions, args.formula, args.seed)
    print(f"{'n_v':>5} {'gamma':>7} {'passes':>6} {'dynamic_s':>10} {'recompute_s':>11} {'ratio':>8}")
    for n, r in reports.items():
        passes = ",".join(map(str, sorted(r.pass_counts))) or "-"
        print(f"{n:>5} {r.gamma_vertices:>7} {passes:>6} {r.mean_dynamic:>10.2e} "
              f"{r.mean_recompute:>11.2e} {r.ratio:>8.4f}")


if __name__ == "__main__":
    main()

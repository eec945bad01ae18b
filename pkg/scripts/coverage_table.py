"""Monte-Carlo coverage and width ratios for the built-in designs.

    python3 scripts/coverage_table.py --reps 200 --examples ex3 ex4 ex5 --out coverage.json
"""

import argparse
import json
import time

from eibounds.district import AnalysisConfig
from eibounds.simulation import EXAMPLES, GeneratorSpec, coverage_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--examples", nargs="+", default=["ex1", "ex2", "ex3", "ex4", "ex5", "ex6"], choices=EXAMPLES)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--p", type=int, default=1000)
    ap.add_argument("--n", type=int, default=150)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--prop", choices=("2", "3", "nonparam"), default="2")
    ap.add_argument("--x", type=float, nargs="+", default=[0.0, 0.5, 1.0, 1.5, 2.0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="write the full summaries as JSON")
    args = ap.parse_args()

    config = AnalysisConfig(lam=args.lam, prop=args.prop)
    summaries = []
    print(f"{'design':8} {'x':>5} {'cover':>6} {'E[WR]':>7} {'|CI|/|DD|':>9} {'empty':>6}")
    for ex in args.examples:
        t0 = time.perf_counter()
        s = coverage_experiment(GeneratorSpec(ex, p=args.p, n=args.n, seed=args.seed), args.reps,
                                args.x, config, workers=args.workers)
        for r in s.rows:
            print(f"{ex:8} {r.x:5.2f} {r.coverage:6.3f} {r.mean_width_ratio:7.4f} "
                  f"{r.ratio_of_mean_widths:9.4f} {r.empty_fraction:6.3f}")
        print(f"{'':8} CI_0 nonempty {s.ci0_nonempty:.3f}, {time.perf_counter() - t0:.1f}s")
        summaries.append(s.to_dict())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": config.to_dict(), "summaries": summaries}, fh, indent=2)


if __name__ == "__main__":
    main()

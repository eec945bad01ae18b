"""Large-p single runs of the closed-form designs next to their population limits."""

import argparse

from scipy.integrate import quad

from eibounds import GeneratorSpec, analyze, fit_quadratic, generate
from eibounds.w1 import auto_domain, prop2_constraints, w1_bound
from eibounds.selection import width_ratio


def _fmt(iv):
    return "empty" if iv.empty else f"[{iv.lo:.4f}, {iv.hi:.4f}]"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--T", type=float, default=0.4)
    ap.add_argument("--tau", type=float, default=0.2)
    args = ap.parse_args()

    ds = generate(GeneratorSpec("ex1", p=args.p, seed=args.seed, params={"T": args.T, "tau": args.tau}))
    a = analyze(ds, x_grid=[0.0])
    T = args.T
    print(f"ex1  CI_0 {_fmt(a.ci[0.0])}  limit [{T - T / 3:.4f}, {T + T / 3:.4f}]")
    print(f"     WR_0 {width_ratio(a.ci[0.0], a.dd):.4f}  limit {1 / (3 * max(T, 1 - T)):.4f}")

    ds = generate(GeneratorSpec("ex2", p=args.p, seed=args.seed))
    a = analyze(ds, x_grid=[0.0])
    print(f"ex2  CI_0 {_fmt(a.ci[0.0])}  limit [0, 0.3333]")
    print(f"     DD {_fmt(a.dd)}  limit [0, 0.5]  WR_0 {width_ratio(a.ci[0.0], a.dd):.4f}  limit 0.6667")

    ds = generate(GeneratorSpec("ex3", p=max(args.p, 50000), seed=args.seed))
    b = w1_bound(fit_quadratic(ds).theta, prop2_constraints(*auto_domain(ds)))
    dd_limit = 2 * quad(lambda x: min(x, (1 - x) ** 2), 0, 1, points=[(3 - 5**0.5) / 2])[0]
    print(f"ex3  w1 [{b.wl:.4f}, {b.wu:.4f}]  limit [-1, -1]")
    print(f"     DD upper {analyze(ds, x_grid=[0.0]).dd.hi:.5f}  limit {dd_limit:.7f}")


if __name__ == "__main__":
    main()

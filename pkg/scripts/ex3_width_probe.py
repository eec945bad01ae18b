"""Width ratio of CI_1 under the ex3 design and two data-generating variants.

The acceptance target for E[WR_1] is 0.29 +- 0.06. This probe shows that none of
the natural readings of the design gets near it:

  lattice   x rounded to count/n, beta_w = 1 - x exactly (the shipped generator)
  raw       x ~ U(0,1) stored unrounded, t = (1 - x)^2
  binomial  x on the lattice, white count ~ Binomial(n(1-x), 1 - x)
"""

import argparse

import numpy as np

from eibounds.data import Dataset, true_district_b
from eibounds.district import analyze
from eibounds.rng import binomial_inversion, stream
from eibounds.selection import width_ratio


def make(variant, p, n, seed, rep):
    rng = stream(seed, rep)
    raw = rng.uniform(0, 1, p)
    if variant == "raw":
        x = np.clip(raw, 1e-9, 1 - 1e-9)
        bw = 1 - x
    else:
        black = np.clip(np.rint(n * raw), 1, n - 1)
        x = black / n
        white = n - black
        bw = 1 - x if variant == "lattice" else binomial_inversion(rng, white, 1 - x) / white
    bb = np.zeros(p)
    t = (1 - x) * bw
    return Dataset(range(p), np.full(p, float(n)), x, t, bb, bw, name=f"{variant}-{rep}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--p", type=int, default=1000)
    ap.add_argument("--n", type=int, default=150)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for variant in ("lattice", "raw", "binomial"):
        wr, cov, w_hi = [], [], []
        for rep in range(args.reps):
            ds = make(variant, args.p, args.n, args.seed, rep)
            a = analyze(ds, x_grid=[1.0])
            wr.append(width_ratio(a.ci[1.0], a.dd))
            cov.append(true_district_b(ds) in a.ci[1.0])
            w_hi.append(a.w1b.wu)
        print(f"{variant:9} E[WR_1]={np.mean(wr):.4f}  max WR_1={np.max(wr):.4f}  coverage={np.mean(cov):.3f}  "
              f"median wu={np.median(w_hi):.3f}")


if __name__ == "__main__":
    main()

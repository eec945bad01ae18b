"""Synthetic 2x2 datasets with known ground truth and Monte-Carlo coverage runs.

Designs:

ex1(T, tau)   beta_b = T + tau(1-x),      beta_w = T - tau x        (t = T)
ex2(tau)      beta_b = tau(1-x),          beta_w = 1 - tau x        (t = 1-x)
ex3           beta_b = 0,                 beta_w = 1 - x            (t = (1-x)^2)
ex4, ex5      overdispersed logistic-binomial group rates; the normal random
              effect enters the logit multiplied by (1-x) when scale_effect=1
              (ex4 default) and unmultiplied when scale_effect=0 (ex5 default,
              which is the variant whose width ratio hits the ex5 target)
ex6(T, b2)    beta_b = T + b2(x^2-1),     beta_w = T + b2(x^2+x)    (t = T again)
custom        linear contextual means with binomial counts and optional varying n

Group counts are integers: the group-b count is round(n*x) kept inside
[1, n-1] and x is replaced by count/n, so the accounting identity holds
exactly for the stored (x, t, beta_b, beta_w).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
from scipy.special import expit

from .data import Dataset, true_district_b
from .district import DEFAULT_X_GRID, AnalysisConfig, analyze
from .rng import binomial_inversion, stream

EXAMPLES = ("ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "custom")

DEFAULTS: Dict[str, Dict[str, float]] = {
    "ex1": {"T": 0.4, "tau": 0.2, "x_low": 0.0, "x_high": 1.0},
    "ex2": {"tau": 0.5, "x_low": 0.0, "x_high": 1.0},
    "ex3": {"x_low": 0.0, "x_high": 1.0},
    "ex4": {
        "s": 0.5, "b0": 2.197225, "b1": -1.791759, "w0": 2.197225, "w1": 0.0,
        "x_low": 0.0, "x_high": 0.95, "scale_effect": 1.0,
    },
    "ex5": {
        "s": 1.0, "b0": 0.0, "b1": 0.0, "w0": 2.197225, "w1": 0.0,
        "x_low": 0.0, "x_high": 0.7, "scale_effect": 0.0,
    },
    "ex6": {"T": 1 / 3, "b2": 1 / 3, "x_low": 0.0, "x_high": 1.0},
    "custom": {
        "b0": 0.6, "b1": -0.2, "w0": 0.3, "w1": 0.2,
        "x_low": 0.0, "x_high": 1.0, "n_low": 0.0, "n_high": 0.0,
    },
}


@dataclass(frozen=True)
class GeneratorSpec:
    """What to simulate. ``params`` overrides the per-example defaults.

    For ``custom``, ``n_low``/``n_high`` > 0 draw per-precinct sizes uniformly
    from that integer range instead of using the constant ``n``.
    """

    example: str
    p: int = 1000
    n: int = 150
    seed: int = 0
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ValueError(f"unknown example {self.example!r}; choose from {EXAMPLES}")
        unknown = set(self.params) - set(DEFAULTS[self.example])
        if unknown:
            raise ValueError(f"unknown parameters for {self.example}: {sorted(unknown)}")
        if self.p < 3:
            raise ValueError("need p >= 3 precincts")
        if self.n < 2:
            raise ValueError("need n >= 2 so both groups are nonempty")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self._check_ranges(self.resolved())

    def resolved(self) -> Dict[str, float]:
        return {**DEFAULTS[self.example], **self.params}

    def _check_ranges(self, q: Dict[str, float]) -> None:
        if not 0 <= q["x_low"] < q["x_high"] <= 1:
            raise ValueError(f"need 0 <= x_low < x_high <= 1, got {q['x_low']}, {q['x_high']}")
        ex = self.example
        if ex == "ex1":
            T, tau = q["T"], q["tau"]
            if not 0 < T < 1 or abs(tau) > min(T, 1 - T) + 1e-12:
                raise ValueError(f"ex1 needs 0 < T < 1 and |tau| <= min(T, 1-T); got T={T}, tau={tau}")
        elif ex == "ex2":
            if not 0 <= q["tau"] <= 1:
                raise ValueError(f"ex2 needs tau in [0, 1], got {q['tau']}")
        elif ex == "ex6":
            T, b2 = q["T"], q["b2"]
            lo, hi = max(-T / 2, -(1 - T)), min(T, (1 - T) / 2)
            if not 0 < T < 1 or not lo - 1e-12 <= b2 <= hi + 1e-12:
                raise ValueError(f"ex6 needs 0 < T < 1 and b2 in [{lo}, {hi}]; got T={T}, b2={b2}")
        elif ex in ("ex4", "ex5"):
            if q["s"] < 0:
                raise ValueError("s must be nonnegative")
        elif ex == "custom":
            for a, b in (("b0", "b1"), ("w0", "w1")):
                ends = (q[a] + q[b] * q["x_low"], q[a] + q[b] * q["x_high"])
                if min(ends) < 0 or max(ends) > 1:
                    raise ValueError(f"custom: {a} + {b}*x must stay in [0, 1] on the x range")
            if q["n_high"] > 0 and not 2 <= q["n_low"] <= q["n_high"]:
                raise ValueError("custom: need 2 <= n_low <= n_high")


def _shares(rng, spec: GeneratorSpec, q, sizes):
    raw = rng.uniform(q["x_low"], q["x_high"], spec.p)
    black = np.clip(np.rint(sizes * raw), 1, sizes - 1)
    return black, black / sizes


def generate(spec: GeneratorSpec, rep: Optional[int] = None) -> Dataset:
    """Draw one dataset; ``rep`` selects an independent replication stream."""
    rng = stream(spec.seed) if rep is None else stream(spec.seed, rep)
    q = spec.resolved()
    ex = spec.example
    sizes = np.full(spec.p, float(spec.n))
    if ex == "custom" and q["n_high"] > 0:
        sizes = rng.integers(int(q["n_low"]), int(q["n_high"]), endpoint=True, size=spec.p).astype(float)
    black, x = _shares(rng, spec, q, sizes)
    white = sizes - black

    if ex == "ex1":
        bb = q["T"] + q["tau"] * (1 - x)
        bw = q["T"] - q["tau"] * x
    elif ex == "ex2":
        bb = q["tau"] * (1 - x)
        bw = 1 - q["tau"] * x
    elif ex == "ex3":
        bb = np.zeros_like(x)
        bw = 1 - x
    elif ex == "ex6":
        bb = q["T"] + q["b2"] * (x * x - 1)
        bw = q["T"] + q["b2"] * (x * x + x)
    elif ex in ("ex4", "ex5"):
        mult = (1 - x) if q["scale_effect"] else 1.0
        eb = rng.normal(0.0, q["s"], spec.p) * mult
        ew = rng.normal(0.0, q["s"], spec.p) * mult
        pb = expit(q["b0"] + q["b1"] * x + eb)
        pw = expit(q["w0"] + q["w1"] * x + ew)
        bb = binomial_inversion(rng, black, pb) / black
        bw = binomial_inversion(rng, white, pw) / white
    else:
        bb = binomial_inversion(rng, black, q["b0"] + q["b1"] * x) / black
        bw = binomial_inversion(rng, white, q["w0"] + q["w1"] * x) / white

    bb = np.clip(bb, 0.0, 1.0)
    bw = np.clip(bw, 0.0, 1.0)
    t = np.clip(x * bb + (1 - x) * bw, 0.0, 1.0)
    name = f"{ex}-seed{spec.seed}" + ("" if rep is None else f"-rep{rep}")
    return Dataset(
        ids=[f"p{i + 1}" for i in range(spec.p)],
        n=sizes,
        x=x,
        t=t,
        beta_b=bb,
        beta_w=bw,
        name=name,
    )


@dataclass(frozen=True)
class CoverageRow:
    x: float
    coverage: float
    mean_ci_width: float
    mean_dd_width: float
    mean_width_ratio: float
    ratio_of_mean_widths: float
    empty_fraction: float


@dataclass(frozen=True)
class CoverageSummary:
    spec: GeneratorSpec
    reps: int
    rows: Sequence[CoverageRow]
    ci0_nonempty: float

    def row(self, x: float) -> CoverageRow:
        for r in self.rows:
            if abs(r.x - x) < 1e-12:
                return r
        raise KeyError(x)

    def to_dict(self) -> dict:
        return {
            "example": self.spec.example,
            "p": self.spec.p,
            "n": self.spec.n,
            "seed": self.spec.seed,
            "params": self.spec.resolved(),
            "reps": self.reps,
            "ci0_nonempty": self.ci0_nonempty,
            "rows": [r.__dict__ for r in self.rows],
        }


def _one_rep(spec: GeneratorSpec, rep: int, grid, config: AnalysisConfig):
    ds = generate(spec, rep)
    b = true_district_b(ds)
    a = analyze(ds, config, grid)
    cap = [b in a.ci[x] for x in grid]
    widths = [a.ci[x].width for x in grid]
    empties = [a.ci[x].empty for x in grid]
    return cap, widths, empties, a.dd.width, not a.ci0.empty


def coverage_experiment(
    spec: GeneratorSpec,
    reps: int,
    x_grid: Sequence[float] = DEFAULT_X_GRID,
    config: Optional[AnalysisConfig] = None,
    workers: int = 1,
) -> CoverageSummary:
    """Replicate ``generate`` + ``analyze``; replication k uses stream (seed, k)."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    config = config or AnalysisConfig()
    grid = tuple(float(x) for x in x_grid)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            out = list(ex.map(_one_rep, [spec] * reps, range(reps), [grid] * reps, [config] * reps))
    else:
        out = [_one_rep(spec, k, grid, config) for k in range(reps)]

    cap = np.array([o[0] for o in out], dtype=float)
    wid = np.array([o[1] for o in out], dtype=float)
    emp = np.array([o[2] for o in out], dtype=float)
    ddw = np.array([o[3] for o in out], dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(ddw[:, None] > 0, wid / ddw[:, None], np.nan)
    rows = [
        CoverageRow(
            x=x,
            coverage=float(cap[:, k].mean()),
            mean_ci_width=float(wid[:, k].mean()),
            mean_dd_width=float(ddw.mean()),
            mean_width_ratio=float(np.nanmean(ratios[:, k])) if np.any(ddw > 0) else float("nan"),
            ratio_of_mean_widths=float(wid[:, k].mean() / ddw.mean()) if ddw.mean() > 0 else float("nan"),
            empty_fraction=float(emp[:, k].mean()),
        )
        for k, x in enumerate(grid)
    ]
    return CoverageSummary(spec=spec, reps=reps, rows=rows, ci0_nonempty=float(np.mean([o[4] for o in out])))

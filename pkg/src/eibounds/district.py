"""District parameter B: point estimate, regression bound and conservative CI_x."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .data import DataError, Dataset
from .dd import Interval, district_dd
from .regression import RegressionFit, Theta, fit_quadratic
from .w1 import (
    ConstraintSet,
    W1Bound,
    auto_domain,
    constraint_set,
    nonparametric_constraints,
    w1_bound,
)

DEFAULT_X_GRID = tuple(np.round(np.arange(0, 2.0001, 0.25), 2).tolist())
TIE_RTOL = 1e-9


def _nx(ds: Dataset) -> Tuple[np.ndarray, float]:
    w = ds.n * ds.x
    den = float(w.sum())
    if not den > 0:
        raise DataError("sum of n*x is zero; district parameter undefined")
    return w, den


def _check_lambda(lam: float) -> None:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam!r}")


def precinct_b(ds: Dataset, lam: float, w1: float, theta) -> np.ndarray:
    """b_i(lambda, w1, theta): predicted beta_b_i given the slope w1."""
    w0, c1, d1 = theta
    x, t = ds.x, ds.t
    return (w0 + c1 + d1 * x) + lam * (t - w0 - c1 * x - d1 * x * x) + w1 * (x - 1)


def point_estimate_b(ds: Dataset, lam: float, w1: float, theta) -> float:
    w, den = _nx(ds)
    return float(np.dot(w, precinct_b(ds, lam, w1, theta)) / den)


@dataclass(frozen=True)
class DistrictWeights:
    r: float
    h0: float
    h: np.ndarray
    s1: float
    lam: float


def district_weights(ds: Dataset, lam: float = 1.0) -> DistrictWeights:
    _check_lambda(lam)
    w, den = _nx(ds)
    x, t = ds.x, ds.t
    a = w / den
    r = float(np.dot(a, 1 - x))
    h0 = float(lam * np.dot(a, t))
    h = np.array([np.sum(a * (1 - lam)), np.dot(a, 1 - lam * x), np.dot(a, x - lam * x * x)])
    s1 = float(np.sqrt(np.sum((a * ((1 + lam) / 2 - lam * x)) ** 2)))
    return DistrictWeights(r=r, h0=h0, h=h, s1=s1, lam=lam)


@dataclass(frozen=True)
class RegressionBound:
    b_hat_l: float
    b_hat_u: float

    @property
    def flipped(self) -> bool:
        return self.b_hat_l > self.b_hat_u

    @property
    def interval(self) -> Interval:
        return Interval(self.b_hat_l, self.b_hat_u)


def regression_bound(ds: Dataset, lam: float, fit: Union[RegressionFit, Theta], w1b: W1Bound) -> RegressionBound:
    """[B(lambda, wu, theta), B(lambda, wl, theta)]; B decreases in w1, so wu gives the lower end."""
    theta = fit.theta if isinstance(fit, RegressionFit) else fit
    return RegressionBound(
        b_hat_l=point_estimate_b(ds, lam, w1b.wu, theta),
        b_hat_u=point_estimate_b(ds, lam, w1b.wl, theta),
    )


def bound_entries(dw: DistrictWeights, cs: ConstraintSet, theta) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-constraint lower/upper entries BL_j, BU_j and their theta-gradients."""
    th = np.asarray(theta, dtype=float)
    grad_l = dw.h[None, :] - dw.r * cs.gu
    grad_u = dw.h[None, :] - dw.r * cs.gl
    bl = dw.h0 - dw.r * cs.gu0 + grad_l @ th
    bu = dw.h0 - dw.r * cs.gl0 + grad_u @ th
    return bl, bu, grad_l, grad_u


@dataclass(frozen=True)
class TieDiagnostics:
    """Checks of the three regularity conditions, each with the margin it was judged on."""

    positive_r: bool
    r: float
    unique_lower: bool
    gap_lower: float
    unique_upper: bool
    gap_upper: float
    distinct_bounds: bool
    w_gap: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.positive_r and self.unique_lower and self.unique_upper and self.distinct_bounds


def tie_diagnostics(dw: DistrictWeights, w1b: W1Bound) -> TieDiagnostics:
    tol = TIE_RTOL * (1 + abs(w1b.wl) + abs(w1b.wu))
    return TieDiagnostics(
        positive_r=dw.r > tol,
        r=dw.r,
        unique_lower=w1b.tie_gap_l > tol,
        gap_lower=w1b.tie_gap_l,
        unique_upper=w1b.tie_gap_u > tol,
        gap_upper=w1b.tie_gap_u,
        distinct_bounds=abs(w1b.wu - w1b.wl) > tol,
        w_gap=w1b.wu - w1b.wl,
        tolerance=tol,
    )


@dataclass(frozen=True)
class CIResult:
    x: float
    b_hat_l: float
    b_hat_u: float
    sl: float
    su: float
    j_l: int
    j_u: int
    raw: Interval
    ci: Interval
    dd: Interval
    ties: TieDiagnostics


def _standard_errors(dw: DistrictWeights, cs: ConstraintSet, fit: RegressionFit):
    bl, bu, grad_l, grad_u = bound_entries(dw, cs, fit.theta)
    jl = int(np.argmax(bl))
    ju = int(np.argmin(bu))
    gl_, gu_ = grad_l[jl], grad_u[ju]
    sl = dw.s1 + float(np.sqrt(max(gl_ @ fit.v @ gl_, 0.0)))
    su = dw.s1 + float(np.sqrt(max(gu_ @ fit.v @ gu_, 0.0)))
    return float(bl[jl]), float(bu[ju]), sl, su, jl, ju


def confidence_interval(
    ds: Dataset,
    lam: float,
    fit: RegressionFit,
    cs: ConstraintSet,
    x: float,
    dd: Optional[Interval] = None,
) -> CIResult:
    """CI_x = [BL - x*SL, BU + x*SU] intersected with DD; may come back empty."""
    if not x >= 0:
        raise ValueError(f"x must be >= 0, got {x!r}")
    dw = district_weights(ds, lam)
    dd = district_dd(ds) if dd is None else dd
    bl, bu, sl, su, jl, ju = _standard_errors(dw, cs, fit)
    raw = Interval(bl - x * sl, bu + x * su)
    ties = tie_diagnostics(dw, w1_bound(fit.theta, cs))
    return CIResult(x, bl, bu, sl, su, jl, ju, raw, raw.intersect(dd), dd, ties)


@dataclass(frozen=True)
class AnalysisConfig:
    lam: float = 1.0
    prop: str = "2"
    lu: Optional[Tuple[float, float]] = None
    weights: str = "unit"
    cov_type: str = "HC1"
    bins: int = 25
    min_bin_count: int = 20
    x_grid: Tuple[float, ...] = DEFAULT_X_GRID

    def __post_init__(self):
        _check_lambda(self.lam)
        if self.prop not in ("2", "3", "nonparam"):
            raise ValueError(f"prop must be '2', '3' or 'nonparam', got {self.prop!r}")
        if self.lu is not None:
            l, u = self.lu
            if self.prop == "2" and not 0 < l < u < 1:
                raise ValueError(f"prop 2 needs 0 < l < u < 1, got {self.lu}")
        if any(not v >= 0 for v in self.x_grid):
            raise ValueError("x grid values must be >= 0")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["lu"] = list(self.lu) if self.lu is not None else "auto"
        d["x_grid"] = list(self.x_grid)
        return d


def build_constraints(ds: Dataset, config: AnalysisConfig) -> ConstraintSet:
    if config.prop == "3":
        return constraint_set("prop3")
    lu = config.lu if config.lu is not None else auto_domain(ds)
    if config.prop == "2":
        return constraint_set("prop2", *lu)
    return nonparametric_constraints(ds, config.bins, lu, config.min_bin_count)


@dataclass(frozen=True)
class DistrictAnalysis:
    name: str
    config: AnalysisConfig
    weights: DistrictWeights
    fit: RegressionFit
    constraints: ConstraintSet
    w1b: W1Bound
    b_hat_l: float
    b_hat_u: float
    sl: float
    su: float
    j_l: int
    j_u: int
    dd: Interval
    ci: Dict[float, Interval]
    ci_raw: Dict[float, Interval]
    ties: TieDiagnostics

    @property
    def regression_bound(self) -> RegressionBound:
        return RegressionBound(self.b_hat_l, self.b_hat_u)

    @property
    def ci0(self) -> Interval:
        return self.regression_bound.interval.intersect(self.dd)

    def to_dict(self) -> dict:
        th = self.fit.theta
        return {
            "name": self.name,
            "dd": self.dd.as_list(),
            "dd_width": self.dd.width,
            "b_hat_l": self.b_hat_l,
            "b_hat_u": self.b_hat_u,
            "r": self.weights.r,
            "h0": self.weights.h0,
            "h": self.weights.h.tolist(),
            "s1": self.weights.s1,
            "sl": self.sl,
            "su": self.su,
            "j_l": self.j_l,
            "j_u": self.j_u,
            "theta": {"w0": th.w0, "c1": th.c1, "d1": th.d1},
            "v": self.fit.v.tolist(),
            "w1": {
                "wl": self.w1b.wl,
                "wu": self.w1b.wu,
                "active_l": self.w1b.active_l,
                "active_u": self.w1b.active_u,
                "empty": self.w1b.empty,
                "flags": list(self.w1b.flags),
            },
            "ci": {_key(x): iv.as_list() for x, iv in self.ci.items()},
            "ci_raw": {_key(x): iv.as_list() for x, iv in self.ci_raw.items()},
            "ties": asdict(self.ties) | {"ok": self.ties.ok},
            "params": {
                "lambda": self.config.lam,
                "prop": self.config.prop,
                "l": self.constraints.l,
                "u": self.constraints.u,
                "weights": self.config.weights,
                "cov_type": self.config.cov_type,
            },
        }


def _key(x: float) -> str:
    return f"{x:g}"


def analyze(ds: Dataset, config: Optional[AnalysisConfig] = None, x_grid: Optional[Sequence[float]] = None) -> DistrictAnalysis:
    """Full pipeline for one dataset: fit, w1 bound, regression bound, DD and CI_x over a grid."""
    config = config or AnalysisConfig()
    grid = tuple(x_grid) if x_grid is not None else config.x_grid
    fit = fit_quadratic(ds, config.weights, config.cov_type)
    cs = build_constraints(ds, config)
    w1b = w1_bound(fit.theta, cs)
    dw = district_weights(ds, config.lam)
    dd = district_dd(ds)
    bl, bu, sl, su, jl, ju = _standard_errors(dw, cs, fit)
    ci, raw = {}, {}
    for x in grid:
        raw[x] = Interval(bl - x * sl, bu + x * su)
        ci[x] = raw[x].intersect(dd)
    return DistrictAnalysis(
        name=ds.name,
        config=config,
        weights=dw,
        fit=fit,
        constraints=cs,
        w1b=w1b,
        b_hat_l=bl,
        b_hat_u=bu,
        sl=sl,
        su=su,
        j_l=jl,
        j_u=ju,
        dd=dd,
        ci=ci,
        ci_raw=raw,
        ties=tie_diagnostics(dw, w1b),
    )

"""Quadratic regression of t on x with a heteroskedasticity-robust sandwich covariance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from .data import DataError, Dataset

MAX_CONDITION = 1e12


class Theta(NamedTuple):
    """Coefficients of E(t|x) = w0 + c1*x + d1*x^2."""

    w0: float
    c1: float
    d1: float

    @property
    def array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def linear_contextual(self, w1: float):
        """(w0, w1, b0, b1) of the linear contextual model for a given slope w1."""
        return self.w0, w1, self.c1 + self.w0 - w1, self.d1 + w1


class RankDeficientError(DataError):
    pass


@dataclass(frozen=True)
class RegressionFit:
    theta: Theta
    v: np.ndarray
    residuals: np.ndarray
    weights_used: str
    cov_type: str
    nobs: int
    condition: float

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        w0, c1, d1 = self.theta
        return w0 + c1 * x + d1 * x * x


def design(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.column_stack([np.ones_like(x), x, x * x])


def regression_weights(ds: Dataset, weights: str) -> np.ndarray:
    if weights == "unit":
        return np.ones(len(ds))
    if weights == "population":
        return np.array(ds.n, dtype=float)
    raise ValueError(f"unknown weights {weights!r}; expected 'unit' or 'population'")


def fit_quadratic(ds: Dataset, weights: str = "unit", cov_type: str = "HC1") -> RegressionFit:
    """Weighted least squares via QR; HC0/HC1 sandwich covariance of theta-hat."""
    if cov_type not in ("HC0", "HC1"):
        raise ValueError(f"unknown cov_type {cov_type!r}")
    rho = regression_weights(ds, weights)
    keep = rho > 0
    x, t, rho = ds.x[keep], ds.t[keep], rho[keep]
    if len(np.unique(x)) < 3:
        raise RankDeficientError("quadratic fit needs at least 3 distinct x values with positive weight")

    X = design(x)
    sw = np.sqrt(rho)
    Q, R = np.linalg.qr(X * sw[:, None])
    sv = np.linalg.svd(R, compute_uv=False)
    cond = float((sv[0] / sv[-1]) ** 2) if sv[-1] > 0 else np.inf
    if not cond <= MAX_CONDITION:
        raise RankDeficientError(f"design is numerically rank deficient (normal-matrix condition {cond:.3g})")
    coef = solve_triangular(R, Q.T @ (t * sw))

    resid = t - X @ coef
    Rinv = solve_triangular(R, np.eye(3))
    bread = Rinv @ Rinv.T
    score = X * (rho * resid)[:, None]
    meat = score.T @ score
    v = bread @ meat @ bread
    p = len(x)
    # with p == 3 the fit interpolates and the residuals are zero anyway
    if cov_type == "HC1" and p > 3:
        v = v * p / (p - 3)
    v = 0.5 * (v + v.T)

    full_resid = ds.t - design(ds.x) @ coef
    return RegressionFit(
        theta=Theta(*map(float, coef)),
        v=v,
        residuals=full_resid,
        weights_used=weights,
        cov_type=cov_type,
        nobs=p,
        condition=cond,
    )

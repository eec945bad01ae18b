"""Identification interval for the contextual slope w1.

Every bound here is represented as a family of affine functions of
theta = (w0, c1, d1):

    wl(theta) = max_j gl0[j] + gl[j] . theta
    wu(theta) = min_j gu0[j] + gu[j] . theta

which is the form the confidence-interval construction needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .data import DataError, Dataset
from .dd import w_bounds_arrays

DOMAIN_EPS = 1e-6


@dataclass(frozen=True)
class ConstraintSet:
    gl0: np.ndarray
    gl: np.ndarray
    gu0: np.ndarray
    gu: np.ndarray
    source: str
    l: Optional[float] = None
    u: Optional[float] = None
    flags: Tuple[str, ...] = ()

    @property
    def j_count(self) -> int:
        return len(self.gl0)

    def lower_entries(self, theta) -> np.ndarray:
        return self.gl0 + self.gl @ np.asarray(theta, dtype=float)

    def upper_entries(self, theta) -> np.ndarray:
        return self.gu0 + self.gu @ np.asarray(theta, dtype=float)


@dataclass(frozen=True)
class W1Bound:
    wl: float
    wu: float
    active_l: int
    active_u: int
    tie_gap_l: float
    tie_gap_u: float
    flags: Tuple[str, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return self.wl > self.wu

    @property
    def width(self) -> float:
        return self.wu - self.wl


def _check_domain(l: float, u: float) -> None:
    if not (0 < l < u < 1):
        raise ValueError(f"need 0 < l < u < 1, got l={l!r}, u={u!r}")


def prop3_constraints() -> ConstraintSet:
    """Bounds for the quadratic model holding on all of (0, 1)."""
    return ConstraintSet(
        gl0=np.array([0.0, -1.0]),
        gl=np.array([[-1.0, 0.0, 0.0], [1.0, 1.0, 0.0]]),
        gu0=np.array([1.0, 0.0]),
        gu=np.array([[-1.0, 0.0, 0.0], [1.0, 1.0, 0.0]]),
        source="prop3",
    )


def prop2_constraints(l: float, u: float) -> ConstraintSet:
    """Bounds for the quadratic model holding on [l, u]; only the endpoints bind."""
    _check_domain(l, u)
    gl0, gl, gu0, gu = [], [], [], []
    for a in (l, u):
        k = 1.0 / (1.0 - a)
        cap = [k, k, k - 1.0]
        gl0 += [0.0, -k]
        gl += [[-1.0 / a, 0.0, 0.0], cap]
        gu0 += [1.0 / a, 0.0]
        gu += [[-1.0 / a, 0.0, 0.0], cap]
    return ConstraintSet(
        gl0=np.array(gl0), gl=np.array(gl), gu0=np.array(gu0), gu=np.array(gu), source="prop2", l=l, u=u
    )


def constraint_set(source: str, l: Optional[float] = None, u: Optional[float] = None) -> ConstraintSet:
    if source == "prop3":
        return prop3_constraints()
    if source == "prop2":
        if l is None or u is None:
            raise ValueError("prop2 needs a domain (l, u)")
        return prop2_constraints(l, u)
    raise ValueError(f"unknown constraint source {source!r}")


def auto_domain(ds: Dataset, eps: float = DOMAIN_EPS) -> Tuple[float, float]:
    """Data range of x clipped into (eps, 1 - eps)."""
    x = ds.x[ds.n > 0] if np.any(ds.n > 0) else ds.x
    l = float(np.clip(x.min(), eps, 1 - eps))
    u = float(np.clip(x.max(), eps, 1 - eps))
    if not l < u:
        raise ValueError(f"degenerate x range [{l}, {u}]")
    return l, u


def _runner_up_gap(values: np.ndarray, best: int, sign: float) -> float:
    if len(values) < 2:
        return np.inf
    others = np.delete(values, best)
    return float(sign * (values[best] - (others.max() if sign > 0 else others.min())))


def w1_bound(theta, cs: ConstraintSet) -> W1Bound:
    """Evaluate the bound at theta; ties resolve to the lowest index."""
    th = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(th)):
        raise ValueError("theta must be finite")
    lower = cs.lower_entries(th)
    upper = cs.upper_entries(th)
    jl = int(np.argmax(lower))
    ju = int(np.argmin(upper))
    return W1Bound(
        wl=float(lower[jl]),
        wu=float(upper[ju]),
        active_l=jl,
        active_u=ju,
        tie_gap_l=_runner_up_gap(lower, jl, 1.0),
        tie_gap_u=_runner_up_gap(upper, ju, -1.0),
        flags=cs.flags,
    )


def prop2_closed_form(theta, l: float, u: float) -> Tuple[float, float]:
    """Direct max/min expressions of the two-endpoint bound (used as a cross-check)."""
    w0, c1, d1 = theta
    wl = max(max(-w0 / a, (w0 + c1 + d1 - 1) / (1 - a) - d1) for a in (l, u))
    wu = min(min((1 - w0) / a, (w0 + c1 + d1) / (1 - a) - d1) for a in (l, u))
    return wl, wu


def nonparametric_constraints(
    ds: Dataset,
    bins: int,
    domain: Optional[Sequence[float]] = None,
    min_bin_count: int = 20,
) -> ConstraintSet:
    """Binned version of the sup/inf bound over the conditional means of L and U.

    Precincts with x in ``domain`` (and 0 < x < 1) are sorted by x and cut into
    ``bins`` groups of equal count. For a bin with mean share xb and mean
    bounds Lb, Ub the constraints are (Lb - w0)/xb <= w1 <= (Ub - w0)/xb, which
    is affine in theta with coefficient -1/xb on w0.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    l, u = domain if domain is not None else (0.0, 1.0)
    if not l < u:
        raise ValueError(f"empty domain [{l}, {u}]")
    sel = (ds.x >= l) & (ds.x <= u) & (ds.x > 0) & (ds.x < 1)
    x, t = ds.x[sel], ds.t[sel]
    if len(x) == 0:
        raise DataError(f"no precincts with x in [{l}, {u}]")
    if len(x) < bins * min_bin_count:
        raise DataError(
            f"{len(x)} precincts cannot fill {bins} bins of at least {min_bin_count}"
        )
    order = np.argsort(x, kind="stable")
    lo, hi = w_bounds_arrays(x, t)
    xb, lb, ub = [], [], []
    for chunk in np.array_split(order, bins):
        xb.append(x[chunk].mean())
        lb.append(lo[chunk].mean())
        ub.append(hi[chunk].mean())
    xb, lb, ub = map(np.asarray, (xb, lb, ub))
    coef = np.zeros((bins, 3))
    coef[:, 0] = -1.0 / xb
    flags = ("single_bin",) if bins == 1 else ()
    return ConstraintSet(
        gl0=lb / xb, gl=coef, gu0=ub / xb, gu=coef.copy(), source="nonparam", l=l, u=u, flags=flags
    )


def w1_bound_nonparametric(
    ds: Dataset,
    bins: int,
    domain: Optional[Sequence[float]] = None,
    theta=None,
    min_bin_count: int = 20,
) -> W1Bound:
    if theta is None:
        from .regression import fit_quadratic

        theta = fit_quadratic(ds).theta
    cs = nonparametric_constraints(ds, bins, domain, min_bin_count)
    return w1_bound(theta, cs)

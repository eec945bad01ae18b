"""Duncan-Davis deterministic bounds, precinct level (beta_w) and district level (B)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import DataError, Dataset, Precinct


@dataclass(frozen=True)
class Interval:
    """Closed interval; ``lo > hi`` encodes an empty set (a point has lo == hi)."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return not self.lo <= self.hi

    @property
    def width(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo

    def __contains__(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def contains_interval(self, other: "Interval") -> bool:
        return other.empty or (not self.empty and self.lo <= other.lo and other.hi <= self.hi)

    def as_list(self) -> Optional[list]:
        return None if self.empty else [self.lo, self.hi]


def w_bounds_arrays(x, t):
    """Vectorised precinct bounds [L_i, U_i] for beta_w. Requires x < 1."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(x >= 1):
        raise DataError("beta_w bounds undefined for x = 1")
    lo = np.maximum(0.0, (t - x) / (1 - x))
    hi = np.minimum(1.0, t / (1 - x))
    return lo, hi


def precinct_w_bounds(p: Precinct) -> Interval:
    if p.x >= 1:
        raise DataError(f"precinct {p.id!r}: beta_w bounds undefined for x = 1", column="x")
    lo, hi = w_bounds_arrays(p.x, p.t)
    return Interval(float(lo), float(hi))


def district_dd(ds: Dataset) -> Interval:
    den = ds.nx_total
    if not den > 0:
        raise DataError("sum of n*x is zero; DD bound undefined")
    lo = np.sum(ds.n * np.maximum(0.0, ds.t - (1 - ds.x))) / den
    hi = np.sum(ds.n * np.minimum(ds.t, ds.x)) / den
    return Interval(float(lo), float(hi))

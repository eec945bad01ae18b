"""Precinct-level 2x2 data: types, validation and CSV ingestion/export."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO, Union

import numpy as np

REQUIRED_COLUMNS = ("id", "n", "x", "t")
TRUTH_COLUMNS = ("beta_b", "beta_w")


class DataError(ValueError):
    """Invalid precinct data. ``row`` is 1-based over data rows, ``column`` a field name."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class Precinct:
    id: str
    n: float
    x: float
    t: float
    beta_b: Optional[float] = None
    beta_w: Optional[float] = None


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable, column-oriented collection of precincts.

    ``accounting_tol`` overrides the per-precinct tolerance on the accounting
    identity; by default it is ``1/(2n) + 1e-9``, which absorbs count rounding.
    """

    ids: tuple
    n: np.ndarray
    x: np.ndarray
    t: np.ndarray
    beta_b: Optional[np.ndarray] = None
    beta_w: Optional[np.ndarray] = None
    name: str = ""
    accounting_tol: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        for col in ("n", "x", "t"):
            object.__setattr__(self, col, _frozen(getattr(self, col)))
        if (self.beta_b is None) != (self.beta_w is None):
            raise DataError("beta_b and beta_w must be given together")
        if self.beta_b is not None:
            object.__setattr__(self, "beta_b", _frozen(self.beta_b))
            object.__setattr__(self, "beta_w", _frozen(self.beta_w))
        p = len(self.ids)
        for col in self._columns():
            if getattr(self, col).shape != (p,):
                raise DataError(f"length {getattr(self, col).shape} does not match {p} ids", column=col)
        self._validate()

    def _columns(self):
        return ("n", "x", "t") + (TRUTH_COLUMNS if self.has_ground_truth else ())

    def _validate(self):
        for col in self._columns():
            v = getattr(self, col)
            bad = ~np.isfinite(v)
            if col == "n":
                bad |= v < 0
            else:
                bad |= (v < 0) | (v > 1)
            if bad.any():
                i = int(np.argmax(bad))
                raise DataError(f"value {v[i]!r} out of range", row=i + 1, column=col)
        if self.has_ground_truth:
            implied = self.x * self.beta_b + (1 - self.x) * self.beta_w
            with np.errstate(divide="ignore"):
                tol = (
                    1.0 / (2 * self.n) + 1e-9
                    if self.accounting_tol is None
                    else np.full_like(self.n, self.accounting_tol)
                )
            bad = (self.n > 0) & (np.abs(self.t - implied) > tol)
            if bad.any():
                i = int(np.argmax(bad))
                raise DataError(
                    f"accounting identity violated: t={self.t[i]!r} vs "
                    f"x*beta_b+(1-x)*beta_w={implied[i]!r}",
                    row=i + 1,
                    column="t",
                )

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def has_ground_truth(self) -> bool:
        return self.beta_b is not None

    @property
    def precincts(self) -> list:
        bb = self.beta_b if self.has_ground_truth else [None] * len(self)
        bw = self.beta_w if self.has_ground_truth else [None] * len(self)
        return [
            Precinct(i, float(n), float(x), float(t), None if b is None else float(b), None if w is None else float(w))
            for i, n, x, t, b, w in zip(self.ids, self.n, self.x, self.t, bb, bw)
        ]

    @property
    def nx_total(self) -> float:
        return float(np.sum(self.n * self.x))

    @classmethod
    def from_precincts(cls, precincts: Iterable[Precinct], name: str = "", **kw) -> "Dataset":
        ps = list(precincts)
        truth = [p.beta_b is not None and p.beta_w is not None for p in ps]
        if any(truth) and not all(truth):
            raise DataError("ground truth must be present for all precincts or none")
        has = bool(ps) and all(truth)
        return cls(
            ids=[p.id for p in ps],
            n=[p.n for p in ps],
            x=[p.x for p in ps],
            t=[p.t for p in ps],
            beta_b=[p.beta_b for p in ps] if has else None,
            beta_w=[p.beta_w for p in ps] if has else None,
            name=name,
            **kw,
        )

    def swap_groups(self) -> "Dataset":
        """The same data seen from the other group: x -> 1-x, beta_b <-> beta_w."""
        return Dataset(
            ids=self.ids,
            n=self.n,
            x=1.0 - self.x,
            t=self.t,
            beta_b=self.beta_w,
            beta_w=self.beta_b,
            name=self.name,
            accounting_tol=self.accounting_tol,
        )

    def distinct_x(self) -> int:
        return len(np.unique(self.x))


def true_district_b(ds: Dataset) -> float:
    """Population-weighted mean of beta_b over precincts, weights n*x."""
    if not ds.has_ground_truth:
        raise DataError(f"dataset {ds.name!r} carries no ground truth")
    w = ds.n * ds.x
    den = w.sum()
    if not den > 0:
        raise DataError("sum of n*x is zero; district parameter undefined")
    return float(np.dot(w, ds.beta_b) / den)


def _parse_float(s: str, row: int, col: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise DataError(f"cannot parse {s!r} as a number", row=row, column=col) from None
    if not math.isfinite(v):
        raise DataError(f"value {s!r} out of range", row=row, column=col)
    return v


def _iter_lines(stream):
    for line in stream:
        if line.lstrip().startswith("#"):
            continue
        if not line.strip():
            continue
        yield line


def load_dataset(
    source: Union[str, bytes, TextIO, "io.BufferedIOBase"],
    format: str = "csv",
    name: str = "",
    accounting_tol: Optional[float] = None,
) -> Dataset:
    """Read a dataset from CSV text, bytes, or a text/binary stream.

    Columns ``id,n,x,t`` are required, ``beta_b,beta_w`` optional (both or
    neither). Lines starting with ``#`` are comments. Extra columns are ignored.
    """
    if format != "csv":
        raise ValueError(f"unsupported format {format!r}")
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)
    elif isinstance(source, io.BufferedIOBase) or "b" in getattr(source, "mode", ""):
        source = io.TextIOWrapper(source, encoding="utf-8")

    reader = csv.reader(_iter_lines(source))
    header = next(reader, None)
    if header is None:
        raise DataError("empty file")
    header = [h.strip() for h in header]
    seen = set()
    for h in header:
        if h in seen:
            raise DataError(f"duplicate header column {h!r}")
        seen.add(h)
    missing = [c for c in REQUIRED_COLUMNS if c not in seen]
    if missing:
        raise DataError(f"missing required columns {missing}")
    present_truth = [c for c in TRUTH_COLUMNS if c in seen]
    if len(present_truth) == 1:
        raise DataError("beta_b and beta_w must appear together")
    cols = list(REQUIRED_COLUMNS) + present_truth
    idx = {c: header.index(c) for c in cols}

    ids, vals = [], {c: [] for c in cols[1:]}
    for r, fields in enumerate(reader, start=1):
        if len(fields) != len(header):
            raise DataError(f"expected {len(header)} fields, got {len(fields)}", row=r)
        ids.append(fields[idx["id"]].strip())
        for c in cols[1:]:
            vals[c].append(_parse_float(fields[idx[c]].strip(), r, c))
    if not ids:
        raise DataError("no data rows")
    return Dataset(
        ids=ids,
        n=vals["n"],
        x=vals["x"],
        t=vals["t"],
        beta_b=vals.get("beta_b"),
        beta_w=vals.get("beta_w"),
        name=name,
        accounting_tol=accounting_tol,
    )


def read_csv(path, **kw) -> Dataset:
    kw.setdefault("name", str(path))
    with open(path, encoding="utf-8", newline="") as fh:
        return load_dataset(fh, **kw)


def _fmt(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def dump_dataset(ds: Dataset, stream: Optional[TextIO] = None) -> str:
    """Write ``ds`` as CSV; floats use shortest round-trip repr. Returns the text."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    cols = list(REQUIRED_COLUMNS) + (list(TRUTH_COLUMNS) if ds.has_ground_truth else [])
    w.writerow(cols)
    arrays = [ds.n, ds.x, ds.t] + ([ds.beta_b, ds.beta_w] if ds.has_ground_truth else [])
    for i, pid in enumerate(ds.ids):
        w.writerow([pid] + [_fmt(float(a[i])) for a in arrays])
    text = out.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        dump_dataset(ds, fh)

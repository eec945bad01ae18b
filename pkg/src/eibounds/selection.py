"""Dataset screening heuristics and capture / width-ratio evaluation."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence

from .data import DataError, Dataset, true_district_b
from .dd import Interval
from .district import AnalysisConfig, DistrictAnalysis, analyze

FLIPPED = "flipped_bound"
NO_OVERLAP = "no_dd_overlap"
WIDE_DD = "wide_dd"


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


@dataclass(frozen=True)
class SelectionDecision:
    reasons: FrozenSet[str]
    dd_width: float

    @property
    def selected(self) -> bool:
        return not self.reasons


def select(b_hat_l: float, b_hat_u: float, dd: Interval, dd_width_threshold: float = 0.7,
           use_heuristic_2: bool = False) -> SelectionDecision:
    """Heuristic (I): regression bound not flipped and overlapping DD.
    Heuristic (II), optional: |DD| below the threshold."""
    reasons = set()
    if b_hat_l > b_hat_u:
        reasons.add(FLIPPED)
    elif Interval(b_hat_l, b_hat_u).intersect(dd).empty:
        reasons.add(NO_OVERLAP)
    if use_heuristic_2 and not dd.width < dd_width_threshold:
        reasons.add(WIDE_DD)
    return SelectionDecision(frozenset(reasons), dd.width)


def apply_heuristics(analysis: DistrictAnalysis, dd_width_threshold: float = 0.7,
                     use_heuristic_2: bool = False) -> SelectionDecision:
    return select(analysis.b_hat_l, analysis.b_hat_u, analysis.dd, dd_width_threshold, use_heuristic_2)


def width_ratio(ci: Interval, dd: Interval) -> float:
    if ci.empty:
        return 0.0
    if dd.width <= 0:
        # degenerate DD: a nonempty CI inside it cannot be any narrower
        return 1.0
    return ci.width / dd.width


@dataclass(frozen=True)
class EvaluationRecord:
    dataset_name: str
    b_true: float
    captured: Dict[float, bool]
    width_ratio: Dict[float, float]
    decision: SelectionDecision
    tags: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset_name,
            "b_true": self.b_true,
            "selected": self.decision.selected,
            "reasons": sorted(self.decision.reasons),
            "dd_width": self.decision.dd_width,
            "captured": {f"{x:g}": v for x, v in self.captured.items()},
            "width_ratio": {f"{x:g}": v for x, v in self.width_ratio.items()},
            **({"tags": self.tags} if self.tags else {}),
        }


@dataclass(frozen=True)
class EvalConfig:
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    dd_width_threshold: float = 0.7
    use_heuristic_2: bool = False


def record_from_analysis(analysis: DistrictAnalysis, b_true: float, config: EvalConfig) -> EvaluationRecord:
    captured, ratios = {}, {}
    for x, iv in analysis.ci.items():
        captured[x] = (not iv.empty) and b_true in iv
        ratios[x] = width_ratio(iv, analysis.dd)
    decision = apply_heuristics(analysis, config.dd_width_threshold, config.use_heuristic_2)
    return EvaluationRecord(analysis.name, b_true, captured, ratios, decision)


def evaluate_dataset(ds: Dataset, config: Optional[EvalConfig] = None) -> EvaluationRecord:
    config = config or EvalConfig()
    if not ds.has_ground_truth:
        raise DataError(f"dataset {ds.name!r} has no ground truth to evaluate against")
    return record_from_analysis(analyze(ds, config.analysis), true_district_b(ds), config)


@dataclass(frozen=True)
class ReportRow:
    x: float
    phi: float
    capture_given_selected: float
    mean_wr_given_selected: float
    selected_fraction: float


COLUMNS = ("x", "phi", "capture_given_selected", "mean_wr_given_selected", "selected_fraction")


@dataclass(frozen=True)
class AggregateReport:
    rows: List[ReportRow]
    n_datasets: int
    n_selected: int

    def row(self, x: float) -> ReportRow:
        for r in self.rows:
            if abs(r.x - x) < 1e-12:
                return r
        raise KeyError(x)

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(["" if isinstance(v, float) and math.isnan(v) else repr(float(v))
                        for v in (getattr(r, c) for c in COLUMNS)])
        return out.getvalue()

    def to_dict(self) -> dict:
        return {
            "n_datasets": self.n_datasets,
            "n_selected": self.n_selected,
            "rows": [{c: (None if math.isnan(getattr(r, c)) else getattr(r, c)) for c in COLUMNS} for r in self.rows],
        }


def aggregate_report(records: Sequence[EvaluationRecord], x_grid: Sequence[float]) -> AggregateReport:
    """Per-x capture rate and mean width ratio among selected datasets (NaN if none selected)."""
    if not records:
        raise ValueError("aggregate_report needs at least one record")
    chosen = [r for r in records if r.decision.selected]
    rows = []
    for x in x_grid:
        if chosen:
            cap = sum(r.captured[x] for r in chosen) / len(chosen)
            wr = sum(r.width_ratio[x] for r in chosen) / len(chosen)
        else:
            cap = wr = float("nan")
        rows.append(ReportRow(float(x), normal_cdf(x), cap, wr, len(chosen) / len(records)))
    return AggregateReport(rows, len(records), len(chosen))


def reselect(records: Sequence[EvaluationRecord], dd_width_threshold: float,
             use_heuristic_2: bool = True) -> List[EvaluationRecord]:
    """Re-apply heuristic (II) with a different threshold without re-running analyses."""
    out = []
    for r in records:
        reasons = set(r.decision.reasons) - {WIDE_DD}
        if use_heuristic_2 and not r.decision.dd_width < dd_width_threshold:
            reasons.add(WIDE_DD)
        out.append(EvaluationRecord(r.dataset_name, r.b_true, r.captured, r.width_ratio,
                                    SelectionDecision(frozenset(reasons), r.decision.dd_width), r.tags))
    return out

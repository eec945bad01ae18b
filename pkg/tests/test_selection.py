import math

import pytest
from scipy.stats import norm

from eibounds.data import Dataset
from eibounds.dd import Interval
from eibounds.selection import (
    FLIPPED,
    NO_OVERLAP,
    WIDE_DD,
    EvalConfig,
    EvaluationRecord,
    SelectionDecision,
    aggregate_report,
    evaluate_dataset,
    normal_cdf,
    reselect,
    select,
    width_ratio,
)

from conftest import random_dataset


def test_normal_cdf():
    for x in (0.0, 0.5, 1.0, 1.96, 2.0):
        assert normal_cdf(x) == pytest.approx(norm.cdf(x), abs=1e-15)


def test_select_rules():
    dd = Interval(0.2, 0.6)
    assert select(0.3, 0.4, dd).selected
    assert select(0.5, 0.4, dd).reasons == {FLIPPED}
    assert select(0.7, 0.8, dd).reasons == {NO_OVERLAP}
    assert select(0.6, 0.8, dd).selected  # touching counts as overlap
    assert select(0.3, 0.4, Interval(0.0, 0.7), use_heuristic_2=True).reasons == {WIDE_DD}
    assert select(0.3, 0.4, Interval(0.0, 0.69), use_heuristic_2=True).selected
    assert select(0.3, 0.4, Interval(0.0, 0.9)).selected


def test_width_ratio():
    dd = Interval(0.0, 0.5)
    assert width_ratio(Interval(0.1, 0.2), dd) == pytest.approx(0.2)
    assert width_ratio(Interval(0.3, 0.2), dd) == 0.0
    assert width_ratio(Interval(0.3, 0.3), Interval(0.3, 0.3)) == 1.0


def _rec(name, sel, cap, wr, ddw=0.5):
    reasons = frozenset() if sel else frozenset({FLIPPED})
    return EvaluationRecord(name, 0.3, cap, wr, SelectionDecision(reasons, ddw))


def test_aggregate_by_hand():
    recs = [
        _rec("a", True, {0.0: False, 1.0: True}, {0.0: 0.2, 1.0: 0.4}),
        _rec("b", True, {0.0: True, 1.0: True}, {0.0: 0.1, 1.0: 0.3}),
        _rec("c", False, {0.0: True, 1.0: True}, {0.0: 0.9, 1.0: 0.9}),
    ]
    rep = aggregate_report(recs, [0.0, 1.0])
    assert rep.n_datasets == 3 and rep.n_selected == 2
    assert rep.row(0.0).capture_given_selected == 0.5
    assert rep.row(1.0).mean_wr_given_selected == pytest.approx(0.35)
    assert rep.row(1.0).selected_fraction == pytest.approx(2 / 3)
    lines = rep.to_csv().splitlines()
    assert lines[0] == "x,phi,capture_given_selected,mean_wr_given_selected,selected_fraction"
    assert len(lines) == 3


def test_aggregate_none_selected():
    rep = aggregate_report([_rec("c", False, {0.0: True}, {0.0: 0.9})], [0.0])
    assert math.isnan(rep.row(0.0).capture_given_selected)
    assert rep.to_dict()["rows"][0]["capture_given_selected"] is None
    assert rep.to_csv().splitlines()[1].split(",")[2] == ""
    with pytest.raises(ValueError):
        aggregate_report([], [0.0])


def test_reselect_threshold_monotone():
    recs = [_rec(str(i), True, {0.0: True}, {0.0: 0.1}, ddw=w) for i, w in enumerate([0.1, 0.3, 0.5, 0.7, 0.9])]
    fracs = [aggregate_report(reselect(recs, th), [0.0]).row(0.0).selected_fraction for th in (1.0, 0.8, 0.6, 0.4, 0.2)]
    assert fracs == sorted(fracs, reverse=True)
    assert fracs[0] == 1.0 and fracs[-1] == 0.2


def test_evaluate_needs_truth():
    ds = random_dataset(1, p=50, truth=False)
    with pytest.raises(ValueError):
        evaluate_dataset(ds)
    rec = evaluate_dataset(random_dataset(1, p=50), EvalConfig(use_heuristic_2=True))
    assert set(rec.captured) == set(rec.width_ratio)
    assert rec.to_dict()["dataset"] == "random-1"

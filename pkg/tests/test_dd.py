import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from eibounds.data import DataError, Dataset, Precinct, true_district_b
from eibounds.dd import Interval, district_dd, precinct_w_bounds, w_bounds_arrays

from conftest import random_dataset


def test_precinct_bounds_by_hand():
    iv = precinct_w_bounds(Precinct("p", 100, 0.5, 0.1))
    assert iv.lo == 0.0 and iv.hi == pytest.approx(0.2)
    iv = precinct_w_bounds(Precinct("p", 100, 0.25, 0.9))
    assert iv.lo == pytest.approx((0.9 - 0.25) / 0.75) and iv.hi == 1.0
    assert precinct_w_bounds(Precinct("p", 10, 0.0, 0.37)) == Interval(0.37, 0.37)


def test_precinct_bounds_x_one():
    with pytest.raises(DataError):
        precinct_w_bounds(Precinct("p", 100, 1.0, 0.3))


def test_district_dd_by_hand():
    ds = Dataset.from_precincts([Precinct("a", 100, 0.5, 0.3), Precinct("b", 100, 0.5, 0.8)])
    dd = district_dd(ds)
    assert dd.lo == pytest.approx(0.3, abs=1e-15)
    assert dd.hi == pytest.approx(0.8, abs=1e-15)


def test_district_dd_undefined():
    ds = Dataset.from_precincts([Precinct("a", 100, 0.0, 0.3), Precinct("b", 0, 0.5, 0.8)])
    with pytest.raises(DataError):
        district_dd(ds)


def test_interval_ops():
    a, b = Interval(0, 1), Interval(0.5, 2)
    assert a.intersect(b) == Interval(0.5, 1)
    e = Interval(1, 0)
    assert e.empty and e.width == 0.0 and e.as_list() is None
    assert a.intersect(Interval(2, 3)).empty
    assert a.contains_interval(e) and a.contains_interval(Interval(0.2, 0.3))
    assert not e.contains_interval(a)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 80))
def test_dd_contains_truth(seed, p):
    ds = random_dataset(seed, p=p, n_range=(1, 50))
    dd = district_dd(ds)
    b = true_district_b(ds)
    assert dd.lo - 1e-12 <= b <= dd.hi + 1e-12
    assert 0 <= dd.lo <= dd.hi <= 1 + 1e-15


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_precinct_bounds_contain_truth(seed):
    ds = random_dataset(seed, p=40, x_range=(0.0, 0.999))
    lo, hi = w_bounds_arrays(ds.x, ds.t)
    assert np.all(lo <= ds.beta_w + 1e-12) and np.all(ds.beta_w <= hi + 1e-12)


def test_ex3_dd_upper_population_value():
    # E[2 min(x, (1-x)^2)] for x ~ U(0,1) by quadrature, independent of the code under test
    val = 2 * quad(lambda x: min(x, (1 - x) ** 2), 0, 1, points=[(3 - 5**0.5) / 2])[0]
    assert val == pytest.approx(0.3032767, abs=1e-7)
    x = (np.arange(200000) + 0.5) / 200000
    ds = Dataset(range(len(x)), np.ones_like(x), x, (1 - x) ** 2, name="ex3-grid")
    assert district_dd(ds).hi == pytest.approx(val, abs=1e-6)

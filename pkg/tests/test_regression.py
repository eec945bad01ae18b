import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eibounds.data import Dataset
from eibounds.regression import RankDeficientError, Theta, fit_quadratic

from conftest import random_dataset


def oracle(ds, weights="unit", cov_type="HC1"):
    """Normal equations from raw power sums and a row-by-row sandwich."""
    rho = np.ones(len(ds)) if weights == "unit" else ds.n.astype(float)
    keep = rho > 0
    x, t, rho = ds.x[keep], ds.t[keep], rho[keep]
    s = [np.sum(rho * x**k) for k in range(5)]
    A = np.array([[s[i + j] for j in range(3)] for i in range(3)])
    rhs = np.array([np.sum(rho * t * x**k) for k in range(3)])
    coef = np.linalg.solve(A, rhs)
    Ainv = np.linalg.inv(A)
    meat = np.zeros((3, 3))
    for xi, ti, ri in zip(x, t, rho):
        z = np.array([1.0, xi, xi * xi])
        e = ti - z @ coef
        meat += (ri * e) ** 2 * np.outer(z, z)
    v = Ainv @ meat @ Ainv
    if cov_type == "HC1":
        v *= len(x) / (len(x) - 3)
    return coef, v


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), weights=st.sampled_from(["unit", "population"]),
       cov=st.sampled_from(["HC0", "HC1"]))
def test_matches_normal_equations(seed, weights, cov):
    ds = random_dataset(seed, p=60)
    fit = fit_quadratic(ds, weights, cov)
    coef, v = oracle(ds, weights, cov)
    np.testing.assert_allclose(fit.theta.array, coef, atol=1e-8, rtol=0)
    np.testing.assert_allclose(fit.v, v, atol=1e-8, rtol=1e-8)
    np.testing.assert_array_equal(fit.v, fit.v.T)


def test_exact_quadratic_recovered():
    x = np.linspace(0.05, 0.95, 40)
    t = 0.1 + 0.2 * x + 0.3 * x * x
    fit = fit_quadratic(Dataset(range(40), np.full(40, 100.0), x, t))
    np.testing.assert_allclose(fit.theta.array, [0.1, 0.2, 0.3], atol=1e-12)
    assert np.max(np.abs(fit.v)) < 1e-25
    assert np.max(np.abs(fit.residuals)) < 1e-14


def test_three_points_interpolate_without_inf():
    x = np.array([0.2, 0.5, 0.8])
    fit = fit_quadratic(Dataset(range(3), np.ones(3), x, np.array([0.3, 0.6, 0.2])))
    assert np.all(np.isfinite(fit.v))
    np.testing.assert_allclose(fit.predict(x), [0.3, 0.6, 0.2], atol=1e-12)


def test_rank_deficient():
    x = np.array([0.2, 0.2, 0.5, 0.5])
    with pytest.raises(RankDeficientError):
        fit_quadratic(Dataset(range(4), np.ones(4), x, np.full(4, 0.4)))
    # zero-population rows do not count towards the support under population weights
    x = np.array([0.2, 0.5, 0.8, 0.9])
    ds = Dataset(range(4), np.array([1.0, 1.0, 0.0, 0.0]), x, np.full(4, 0.4))
    with pytest.raises(RankDeficientError):
        fit_quadratic(ds, "population")
    fit_quadratic(ds, "unit")


def test_ill_conditioned():
    x = 0.5 + np.array([0.0, 1e-7, 2e-7, 3e-7])
    with pytest.raises(RankDeficientError):
        fit_quadratic(Dataset(range(4), np.ones(4), x, np.full(4, 0.4)))


def test_bad_options():
    ds = random_dataset(1, p=10)
    with pytest.raises(ValueError):
        fit_quadratic(ds, weights="bogus")
    with pytest.raises(ValueError):
        fit_quadratic(ds, cov_type="HC3")


def test_hc1_scaling():
    ds = random_dataset(2, p=20)
    v0 = fit_quadratic(ds, cov_type="HC0").v
    v1 = fit_quadratic(ds, cov_type="HC1").v
    np.testing.assert_allclose(v1, v0 * 20 / 17, rtol=1e-12)


def test_linear_contextual_mapping():
    th = Theta(0.3, 0.5, -0.4)
    w0, w1, b0, b1 = th.linear_contextual(0.2)
    # t = w0 + (b0 - w0 + w1) x + (b1 - w1) x^2
    assert (b0 - w0 + w1, b1 - w1) == pytest.approx((0.5, -0.4))

import numpy as np
import pytest

from eibounds.data import Dataset


def random_dataset(seed, p=200, truth=True, n_range=(20, 400), x_range=(0.0, 1.0)):
    """Arbitrary data with ground truth; no model structure beyond the accounting identity."""
    rng = np.random.default_rng(seed)
    n = rng.integers(*n_range, size=p).astype(float)
    x = rng.uniform(*x_range, size=p)
    bb = rng.uniform(size=p)
    bw = rng.uniform(size=p)
    t = x * bb + (1 - x) * bw
    return Dataset(
        ids=[f"r{i}" for i in range(p)],
        n=n,
        x=x,
        t=t,
        beta_b=bb if truth else None,
        beta_w=bw if truth else None,
        name=f"random-{seed}",
    )


def linear_dataset(seed, p=500, w=(0.3, 0.2), b=(0.6, -0.2), n=150, noise=0.0):
    """Exact linear contextual effects; with noise=0 every residual is zero."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.02, 0.98, size=p)
    bw = w[0] + w[1] * x + noise * rng.uniform(-1, 1, size=p)
    bb = b[0] + b[1] * x + noise * rng.uniform(-1, 1, size=p)
    t = x * bb + (1 - x) * bw
    return Dataset(ids=range(p), n=np.full(p, float(n)), x=x, t=t, beta_b=bb, beta_w=bw, name=f"linear-{seed}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)

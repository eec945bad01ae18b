"""Seeded counter-based random streams and exact binomial sampling by inversion."""

from __future__ import annotations

import numpy as np
from scipy.stats import binom

# Inversion tables are (len(trials), max_trials + 1); above this use numpy's sampler.
INVERSION_MAX_TRIALS = 2000


def stream(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for ``seed`` and an optional spawn key (e.g. replication index)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def binomial_inversion(rng: np.random.Generator, trials, prob) -> np.ndarray:
    """One Binomial(trials_i, prob_i) draw per element, smallest k with F(k) >= U."""
    trials = np.asarray(trials, dtype=np.int64)
    prob = np.clip(np.asarray(prob, dtype=float), 0.0, 1.0)
    trials, prob = np.broadcast_arrays(trials, prob)
    u = rng.random(trials.shape)
    if trials.size == 0:
        return trials.copy()
    kmax = int(trials.max())
    if kmax > INVERSION_MAX_TRIALS:
        return rng.binomial(trials, prob)
    k = np.arange(kmax + 1)
    cdf = binom.cdf(k[None, :], trials.ravel()[:, None], prob.ravel()[:, None])
    draws = np.sum(cdf < u.ravel()[:, None], axis=1)
    return np.minimum(draws, trials.ravel()).reshape(trials.shape)

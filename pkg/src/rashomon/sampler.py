"""Uniform sampling from R_N(eps).

The Gibbs chain exploits the one-sided structure of membership: clearing a bit
never leaves the set, so the conditional law of bit i given the rest is
Bernoulli(1/2) when setting it keeps membership and degenerate 0 otherwise.
One iteration resamples all N coordinates in a freshly shuffled order; the
stationary distribution is uniform over the members. A rejection sampler over
raw bit vectors is provided as an exactly-uniform cross-check for tiny N
(its acceptance probability vanishes as N grows, so it is a test oracle only).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import MEMBERSHIP_SLACK, FlipVector, RashomonQuery


@dataclass(frozen=True)
class GibbsConfig:
    """Chain length T, burn-in B, thinning K and the chain's PCG64 seed.

    Samples are recorded at iterations t > B with (t - B) % K == 0, giving
    floor((T - B) / K) samples; the defaults yield 950.
    """

    iterations: int = 10_000
    burn_in: int = 500
    thin: int = 10
    seed: int = 0

    def __post_init__(self):
        if not self.iterations > self.burn_in >= 0:
            raise ValueError("need iterations > burn_in >= 0")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")

    @property
    def n_samples(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


@njit(cache=True)
def _gibbs_chain(w, cap, iterations, burn_in, thin, out, gen):  # pragma: no cover
    n = w.shape[0]
    theta = np.zeros(n, np.uint8)
    order = np.arange(n)
    s = 0
    for t in range(1, iterations + 1):
        # recompute the running dot product each sweep so float drift cannot
        # accumulate across the ~T*N incremental updates
        e_dot = 0.0
        for i in range(n):
            if theta[i]:
                e_dot += w[i]
        for i in range(n - 1, 0, -1):  # Fisher-Yates reshuffle of the scan order
            j = gen.integers(0, i + 1)
            tmp = order[i]
            order[i] = order[j]
            order[j] = tmp
        for k in range(n):
            i = order[k]
            if theta[i]:
                if gen.integers(0, 2) == 0:
                    theta[i] = 0
                    e_dot -= w[i]
            elif e_dot + w[i] <= cap:
                if gen.integers(0, 2) == 1:
                    theta[i] = 1
                    e_dot += w[i]
        if t > burn_in and (t - burn_in) % thin == 0:
            for i in range(n):
                out[s, i] = theta[i]
            s += 1
    return s


def gibbs_sample_array(query: RashomonQuery, config: GibbsConfig = GibbsConfig()) -> np.ndarray:
    """Run one Gibbs chain; rows of the returned (samples x N) array are members.

    Deterministic given (query, config); distinct seeds give independent chains.
    """
    ds = query.dataset
    out = np.zeros((config.n_samples, ds.n), dtype=np.uint8)
    gen = np.random.Generator(np.random.PCG64(config.seed))
    cap = ds.n * (query.epsilon + MEMBERSHIP_SLACK)
    _gibbs_chain(np.ascontiguousarray(ds.weights), cap,
                 config.iterations, config.burn_in, config.thin, out, gen)
    return out


def gibbs_sample(query: RashomonQuery, config: GibbsConfig = GibbsConfig()) -> list[FlipVector]:
    """Uniform-at-random members of R_N(eps) via Gibbs sampling."""
    return [FlipVector(row) for row in gibbs_sample_array(query, config)]


REJECTION_LIMIT = 24

_BATCH = 4096


def rejection_sample(query: RashomonQuery, count: int, seed: int = 0) -> list[FlipVector]:
    """Exactly uniform members by drawing raw bit vectors and keeping the members.

    Guarded to N <= 24: acceptance decays like (B(eps)/2)^N, so this is a
    small-N test oracle, not a practical sampler.
    """
    ds = query.dataset
    if ds.n > REJECTION_LIMIT:
        raise ValueError(f"rejection sampling guarded to N <= {REJECTION_LIMIT}, got {ds.n}")
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    cap = ds.n * (query.epsilon + MEMBERSHIP_SLACK)
    kept: list[np.ndarray] = []
    total = 0
    while total < count:
        batch = rng.integers(0, 2, size=(_BATCH, ds.n), dtype=np.uint8)
        members = batch[batch @ ds.weights <= cap]
        kept.append(members)
        total += members.shape[0]
    accepted = np.concatenate(kept)[:count]
    return [FlipVector(row) for row in accepted]

import numpy as np
import pytest

from rashomon import Dataset


@pytest.fixture
def t4() -> Dataset:
    """Four-record dataset used across the suite: weights (0.8, 0.2, 0.4, 0.1)."""
    return Dataset([0.9, 0.6, 0.3, 0.45], [1, 1, 0, 0])


def random_instance(rng: np.random.Generator, n_min: int = 4, n_max: int = 15,
                    eps_max: float = 0.2):
    """Random (dataset, epsilon) with p ~ U[0,1], random nonempty groups."""
    n = int(rng.integers(n_min, n_max + 1))
    p = rng.random(n)
    group = rng.integers(0, 2, size=n)
    group[rng.integers(0, n)] = 1  # force both groups nonempty
    group[rng.integers(0, n)] = 0
    if group.sum() == 0:
        group[0] = 1
    elif group.sum() == n:
        group[0] = 0
    eps = float(rng.random() * eps_max)
    return Dataset(p, group), eps

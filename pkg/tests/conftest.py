import numpy as np
import pytest

from almost2d import GridSpec
from almost2d.families import random_divergence_free


@pytest.fixture(scope="session")
def grid16():
    return GridSpec(16)


@pytest.fixture(scope="session")
def grid24():
    return GridSpec(24)


@pytest.fixture(scope="session")
def grid32():
    return GridSpec(32)


def seeded_fields(grid, count, kmax=5, amplitude=1.0, base_seed=7000):
    """Deterministic batch of divergence-free mean-zero test fields."""
    return [
        random_divergence_free(grid, base_seed + i, kmax=kmax, amplitude=amplitude)
        for i in range(count)
    ]


def random_physical(grid, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((3, grid.n, grid.n, grid.n))

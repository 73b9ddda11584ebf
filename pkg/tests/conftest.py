import itertools

import numpy as np
import pytest

from adaseq.functions import CoverageFunction, ModularFunction
from adaseq.matroids import GraphicMatroid, PartitionMatroid, UniformMatroid


def all_subsets(n):
    for r in range(n + 1):
        for T in itertools.combinations(range(n), r):
            yield frozenset(T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_matroids():
    return {
        "uniform": UniformMatroid(6, 3),
        "partition": PartitionMatroid([0, 0, 1, 1, 2, 2, 2], [1, 2, 1]),
        "graphic": GraphicMatroid(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0), (1, 3)]),
    }


@pytest.fixture
def coverage10():
    rng = np.random.default_rng(10)
    return CoverageFunction([rng.choice(15, size=int(rng.integers(1, 5)), replace=False) for _ in range(10)], 15)


@pytest.fixture
def modular5():
    return ModularFunction([1, 2, 3, 4, 5])

import itertools

import numpy as np
import pytest

from perml1.metric import bfs_distances


@pytest.fixture(scope="session")
def tables():
    """Exact distance tables for the degrees the suites audit against."""
    return {n: bfs_distances(n) for n in range(2, 8)}


@pytest.fixture(scope="session")
def perm_arrays():
    """All one-line rows per degree, in Lehmer-rank order."""
    return {
        n: np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        for n in range(1, 8)
    }

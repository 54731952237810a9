import itertools

import numpy as np
import pytest

from flagcollapse import FilteredGraph


def random_graph(rng, n_lo=4, n_hi=10, distinct=True):
    """Random graph on a few vertices; grades either all distinct or tied."""
    n = int(rng.integers(n_lo, n_hi + 1))
    pairs = list(itertools.combinations(range(n), 2))
    perm = rng.permutation(len(pairs))
    m = int(rng.integers(n, len(pairs) + 1))
    pairs = [pairs[i] for i in perm[:m]]
    if distinct:
        grades = rng.permutation(m) + 1.0
    else:
        grades = rng.integers(1, 5, size=m).astype(float)
    return FilteredGraph.build(
        [(u, v, float(t)) for (u, v), t in zip(pairs, grades)]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

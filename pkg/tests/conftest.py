import os

# Allow worker counts above the core count before numba is imported anywhere;
# set_num_threads can only go up to this initial cap.
os.environ.setdefault("NUMBA_NUM_THREADS", "16")

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def registry():
    from sbmpc.registry import Registry

    return Registry()


class ZeroGenerator:
    """Stands in for a Generator whose normal draws are all zero."""

    def standard_normal(self, size=None):
        return np.zeros(size) if size is not None else 0.0

    def uniform(self, low, high, size=None):
        mid = (np.asarray(low) + np.asarray(high)) / 2.0
        return np.full(size, mid) if size is not None else mid


@pytest.fixture
def zero_rng():
    return ZeroGenerator()

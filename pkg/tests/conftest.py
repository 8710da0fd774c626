"""Shared test fixtures.

Jitted kernels are compiled once per session up front so that timed
tests measure algorithm runtime, not compiler latency.
"""
import numpy as np
import pytest

from jplt.backend import kernels_for


class StubRng:
    """Replays a fixed list of integer draws via the rng.integers interface."""

    def __init__(self, values):
        self.values = [int(v) for v in values]

    def integers(self, high):
        if not self.values:
            raise AssertionError("stub rng exhausted")
        v = self.values.pop(0)
        assert 0 <= v < high
        return v


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    k = kernels_for(11)
    a = np.array([[1, 2], [3, 4]], dtype=np.int64)
    k.mat_mul(a, a, 11)
    k.rref(a.copy(), 11)
    k.all_minors_nonsingular(np.array([[1, 1, 2], [0, 1, 1]], dtype=np.int64), 11)
    yield

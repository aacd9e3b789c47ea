"""Shared fixtures: critical-value pools are expensive, so build them once.

The two session pools (n = 20 and n = 30) are what most inference and
acceptance tests consume. They use a master seed that nothing else in the
suite shares, with the n = 30 pool placed in a distant stream block so the
two simulations never overlap.
"""

import numpy as np
import pytest
from hypothesis import settings

from paretogof import (
    ALL_KINDS,
    RandomStream,
    null_critical_values,
)

MASTER_SEED = 20260822
CV_REPS = 100_000
CV_ALPHAS = (0.01, 0.05, 0.10)

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def cv20():
    return null_critical_values(ALL_KINDS, 20, CV_ALPHAS, CV_REPS,
                                RandomStream(MASTER_SEED, 0))


@pytest.fixture(scope="session")
def cv30():
    return null_critical_values(ALL_KINDS, 30, CV_ALPHAS, CV_REPS,
                                RandomStream(MASTER_SEED, 1 << 21))


@pytest.fixture()
def rng():
    """Plain generator for tests that only need arbitrary but fixed numbers."""
    return np.random.default_rng(99)

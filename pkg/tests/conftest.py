from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from distvote import (
    DistrictPartition,
    TieBreakOrder,
    ValuationProfile,
    WeightVector,
)

DATA_DIR = Path(__file__).parent / "data"

# Seven-voter, three-alternative running example used across the suite.
# Welfare is (3.9, 1.7, 1.4); with districts {0,1,2},{3,4},{5,6} and
# weights (3,2,2) both range voting and plurality elect alternative 2.
EXAMPLE_ROWS = [
    [0.3, 0.5, 0.2],
    [0.4, 0.1, 0.5],
    [0.4, 0.1, 0.5],
    [1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.4, 0.5, 0.1],
    [0.4, 0.5, 0.1],
]


@pytest.fixture
def example_profile() -> ValuationProfile:
    return ValuationProfile.from_rows(EXAMPLE_ROWS)


@pytest.fixture
def example_partition() -> DistrictPartition:
    return DistrictPartition.from_blocks([[0, 1, 2], [3, 4], [5, 6]])


@pytest.fixture
def example_weights() -> WeightVector:
    return WeightVector(np.array([3.0, 2.0, 2.0]))


@pytest.fixture
def identity3() -> TieBreakOrder:
    return TieBreakOrder.identity(3)


@pytest.fixture(scope="session")
def ratings_path() -> Path:
    return DATA_DIR / "synthetic_ratings.csv"


def random_unit_sum_profile(rng: np.random.Generator, n: int, m: int) -> ValuationProfile:
    raw = rng.random((n, m))
    return ValuationProfile(raw / raw.sum(axis=1, keepdims=True))

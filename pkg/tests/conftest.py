"""Shared fixtures: seeded RNG and reference maps."""

import numpy as np
import pytest

from nitsche_lab import AnnulusMap
from nitsche_lab.nitsche_family import NitscheParams, nitsche_map


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def critical() -> AnnulusMap:
    """The critical map (z + 1/conj(z))/2 on A(1, 2)."""
    return nitsche_map(NitscheParams(v=0.0, R=2.0))


@pytest.fixture
def identity_map() -> AnnulusMap:
    """h(z) = z on A(1, 2)."""
    return AnnulusMap(R=2.0, terms={1: (1.0, 0.0)})

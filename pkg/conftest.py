"""Shared pytest fixtures."""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.game import PayoffVector  # noqa: E402
from core.network import GenParams, MultiplexNetwork, generate_er_multiplex  # noqa: E402


@pytest.fixture
def path_network():
    """Two layers over 5 nodes: a path 0-1-2-3-4 and a single edge 0-4."""
    return MultiplexNetwork.from_edges(5, 2, [(0, 0, 1), (0, 1, 2), (0, 2, 3), (0, 3, 4), (1, 0, 4)])


@pytest.fixture
def default_pay():
    return PayoffVector.uniform(2.0, 1.0, 2)


@pytest.fixture
def small_er():
    return generate_er_multiplex(GenParams(n=60, l=2, p=0.1, rng_seed=7))

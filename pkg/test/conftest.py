import numpy as np
import pytest

from tempowalk.edge_store import EdgeBatch, build_index
from tempowalk.synthetic import chain_graph, uniform_temporal_graph


@pytest.fixture
def chain_edges():
    # 0 -> 1 @1, 1 -> 2 @2, 2 -> 3 @3
    return chain_graph(3)


@pytest.fixture
def fan_edges():
    # Node 1 has out-edges at times 2, 2, 5, 9
    return EdgeBatch.from_edges([(1, 2, 2), (1, 3, 2), (1, 4, 5), (1, 5, 9), (0, 1, 1), (4, 1, 7)])


@pytest.fixture
def random_edges():
    return uniform_temporal_graph(60, 1500, 300, seed=11)


@pytest.fixture
def random_store(random_edges):
    return build_index(random_edges)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

import numpy as np
import pytest

from tempowalk.synthetic import chain_graph, hub_skewed_graph, mega_hub_graph, uniform_temporal_graph, zipf_popularity


def test_chain_graph():
    batch = chain_graph(3)
    np.testing.assert_array_equal(batch.sources, [0, 1, 2])
    np.testing.assert_array_equal(batch.targets, [1, 2, 3])
    np.testing.assert_array_equal(batch.times, [1, 2, 3])
    np.testing.assert_array_equal(chain_graph(2, start_time=10).times, [10, 11])


def test_uniform_temporal_graph_is_deterministic():
    first = uniform_temporal_graph(50, 400, 1000, seed=7)
    second = uniform_temporal_graph(50, 400, 1000, seed=7)
    np.testing.assert_array_equal(first.sources, second.sources)
    np.testing.assert_array_equal(first.times, second.times)
    assert first.times.size == 400
    assert np.all(np.diff(first.times) >= 0)
    assert first.times.min() >= 0
    assert first.times.max() < 1000
    assert first.sources.max() < 50


def test_zipf_popularity():
    weights = zipf_popularity(100, 1.2)
    assert weights.sum() == pytest.approx(1.0)
    assert np.all(np.diff(weights) < 0)


def test_hub_skewed_graph_concentrates_sources():
    batch = hub_skewed_graph(500, 20_000, 10_000, seed=3)
    assert batch.sources.size == 20_000
    counts = np.bincount(batch.sources, minlength=500)
    # The aligned hubs own a large share of the edges
    assert counts[:8].sum() > counts[250:].sum()
    assert np.all(np.diff(batch.times) >= 0)


def test_mega_hub_graph():
    batch = mega_hub_graph(5)
    assert batch.sources.size == 10
    inbound = batch.targets == 0
    np.testing.assert_array_equal(batch.sources[inbound], [1, 2, 3, 4, 5])
    np.testing.assert_array_equal(batch.times[inbound], [0, 1, 2, 3, 4])
    np.testing.assert_array_equal(batch.targets[~inbound], [1, 2, 3, 4, 5])
    np.testing.assert_array_equal(batch.times[~inbound], [5, 6, 7, 8, 9])

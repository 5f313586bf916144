import unittest

import numpy as np
import pytest

from tempowalk.edge_store import (
    DirectionMode,
    EdgeBatch,
    NeighborRange,
    TemporalEdge,
    WalkDirection,
    build_index,
    edge_slice_for_ts_group,
    neighborhood_bounds,
    neighborhood_edges,
    temporal_neighborhood,
    timestamp_group_count,
)
from tempowalk.errors import ConfigError, ContractViolationError, InvalidEdgeError
from tempowalk.synthetic import uniform_temporal_graph

A, B, C, D = 10, 20, 30, 40


def _brute_force_neighbors(edges, mode, v, t, direction):
    found = []
    for source, target, time_ in edges.to_edges():
        keys = {
            DirectionMode.DIRECTED_FORWARD: [source],
            DirectionMode.DIRECTED_BACKWARD: [target],
            DirectionMode.UNDIRECTED: [source, target],
        }[mode]
        later = time_ > t if direction is WalkDirection.FORWARD else time_ < t
        found.extend(TemporalEdge(source, target, time_) for key in keys if key == v and later)
    return sorted(found)


class TestBuildIndex(unittest.TestCase):
    def test_empty_input_builds_empty_store(self):
        store = build_index([])
        assert store.edge_count == 0
        assert store.ts_group_count == 0
        assert store.node_count == 0
        assert store.ts_group_offsets.tolist() == [0]
        assert temporal_neighborhood(store, A, 0).empty

    def test_groups_by_timestamp(self):
        store = build_index([(A, B, 5), (A, C, 5), (A, D, 9)])
        assert store.ts_group_offsets.tolist() == [0, 2, 3]
        assert store.ts_group_times.tolist() == [5, 9]
        node_a = store.internal_id(A)
        assert store.region_sizes[node_a] == 3
        assert timestamp_group_count(store, A) == 2

    def test_undirected_store_references_every_edge_twice(self):
        store = build_index([(A, B, 3), (B, A, 3)], DirectionMode.UNDIRECTED)
        assert store.edge_count == 2
        assert store.reference_count == 4
        assert store.region_sizes[store.internal_id(A)] == 2
        assert store.region_sizes[store.internal_id(B)] == 2
        assert store.ts_group_count == 1

    def test_edges_are_time_sorted_with_stable_ties(self):
        edges = EdgeBatch.from_edges([(3, 1, 9), (2, 5, 4), (2, 1, 4), (2, 1, 4), (0, 0, 1)])
        store = build_index(edges)
        stored = store.external_edges().to_edges()
        assert [edge.time for edge in stored] == [1, 4, 4, 4, 9]
        assert stored[1:4] == [(2, 1, 4), (2, 1, 4), (2, 5, 4)]

    def test_external_ids_are_densified(self):
        store = build_index([(1_000_000_007, 5, 1), (5, 42, 2)])
        assert store.node_ids.tolist() == [5, 42, 1_000_000_007]
        assert store.internal_id(42) == 1
        assert store.internal_id(43) == -1
        assert store.sources.max() < store.node_count

    def test_backward_store_keys_regions_by_target(self):
        store = build_index([(A, B, 1), (C, B, 2), (B, D, 3)], DirectionMode.DIRECTED_BACKWARD)
        assert store.region_sizes[store.internal_id(B)] == 2
        assert store.region_sizes[store.internal_id(A)] == 0

    def test_build_is_deterministic(self):
        edges = uniform_temporal_graph(30, 400, 50, seed=2)
        first, second = build_index(edges), build_index(edges)
        for name in ("ts_group_offsets", "node_offsets", "node_edge_refs", "node_group_offsets", "node_group_ptr"):
            assert np.array_equal(getattr(first, name), getattr(second, name))

    def test_rejects_negative_values(self):
        with pytest.raises(InvalidEdgeError):
            build_index([(1, 2, -1)])
        with pytest.raises(InvalidEdgeError):
            build_index([(-1, 2, 1)])

    def test_rejects_non_positive_weight_scale(self):
        with pytest.raises(ConfigError):
            build_index([(1, 2, 1)], weight_scale=0.0)

    def test_self_loops_are_stored_verbatim(self):
        store = build_index([(A, A, 1), (A, B, 2)], DirectionMode.UNDIRECTED)
        assert store.edge_count == 2
        assert store.region_sizes[store.internal_id(A)] == 3


class TestTemporalNeighborhood(unittest.TestCase):
    def setUp(self):
        self.store = build_index([(A, B, 2), (A, C, 2), (A, D, 5), (A, B, 9), (B, A, 4)])

    def test_forward_is_strictly_later(self):
        neighbors = temporal_neighborhood(self.store, A, 2, WalkDirection.FORWARD)
        assert neighbors.size == 2
        assert neighbors.group_count == 2
        assert [edge.time for edge in neighborhood_edges(self.store, neighbors)] == [5, 9]

    def test_forward_after_last_edge_is_empty(self):
        assert temporal_neighborhood(self.store, A, 9).empty

    def test_forward_before_first_edge_is_full_region(self):
        neighbors = temporal_neighborhood(self.store, A, 0)
        assert neighbors.size == 4
        assert neighbors.group_count == 3

    def test_unknown_node_is_empty(self):
        assert temporal_neighborhood(self.store, 99, 0) == NeighborRange(0, 0, 0)

    def test_backward_is_strictly_earlier(self):
        store = build_index([(B, A, 2), (C, A, 2), (D, A, 5), (B, A, 9)], DirectionMode.DIRECTED_BACKWARD)
        neighbors = temporal_neighborhood(store, A, 9, WalkDirection.BACKWARD)
        assert neighbors.size == 3
        assert neighbors.group_count == 2
        assert temporal_neighborhood(store, A, 2, WalkDirection.BACKWARD).empty

    def test_matches_linear_scan_on_random_graphs(self):
        edges = uniform_temporal_graph(25, 600, 40, seed=5)
        for mode in DirectionMode:
            store = build_index(edges, mode)
            for direction in WalkDirection:
                if not store.supports(direction):
                    continue
                for v in range(25):
                    for t in (-1, 0, 7, 20, 39, 40):
                        neighbors = temporal_neighborhood(store, v, t, direction)
                        assert sorted(neighborhood_edges(store, neighbors)) == _brute_force_neighbors(
                            edges, mode, v, t, direction
                        )

    def test_vectorized_bounds_match_scalar_lookup(self):
        edges = uniform_temporal_graph(40, 800, 100, seed=9)
        store = build_index(edges)
        nodes = np.repeat(np.arange(store.node_count), 3)
        times = np.tile(np.array([0, 50, 99]), store.node_count)
        lo, hi, groups = neighborhood_bounds(store, nodes, times, WalkDirection.FORWARD)
        for node, t, start, end, count in zip(nodes, times, lo, hi, groups):
            expected = temporal_neighborhood(store, int(store.node_ids[node]), int(t))
            assert (start, end, count) == tuple(expected)


class TestTimestampGroups(unittest.TestCase):
    def test_group_count(self):
        store = build_index([(A, B, 2), (A, C, 2), (A, D, 5), (A, B, 9), (C, D, 1)])
        assert timestamp_group_count(store, A) == 3
        assert timestamp_group_count(store, C) == 1
        assert timestamp_group_count(store, 1234) == 0

    def test_edge_slices(self):
        store = build_index([(A, B, 5), (A, C, 5), (A, D, 9)])
        assert edge_slice_for_ts_group(store, 0) == (0, 2)
        assert edge_slice_for_ts_group(store, 1) == (2, 3)

    def test_single_group_slice_covers_everything(self):
        store = build_index([(A, B, 5), (C, D, 5)])
        assert edge_slice_for_ts_group(store, 0) == (0, store.edge_count)

    def test_out_of_range_group_is_rejected(self):
        store = build_index([(A, B, 5)])
        with pytest.raises(ContractViolationError):
            edge_slice_for_ts_group(store, 1)
        with pytest.raises(ContractViolationError):
            edge_slice_for_ts_group(store, -1)

    def test_slices_partition_the_edge_array(self):
        store = build_index(uniform_temporal_graph(20, 500, 60, seed=3))
        covered = []
        for group in range(store.ts_group_count):
            start, end = edge_slice_for_ts_group(store, group)
            assert len(set(store.times[start:end].tolist())) == 1
            covered.extend(range(start, end))
        assert covered == list(range(store.edge_count))


@pytest.mark.parametrize(
    ("mode", "factor"),
    [(DirectionMode.DIRECTED_FORWARD, 1), (DirectionMode.DIRECTED_BACKWARD, 1), (DirectionMode.UNDIRECTED, 2)],
)
def test_node_regions_cover_every_reference(mode, factor):
    store = build_index(uniform_temporal_graph(30, 700, 90, seed=4), mode)
    assert int(store.region_sizes.sum()) == factor * store.edge_count
    for node in range(store.node_count):
        start, end = store.node_offsets[node], store.node_offsets[node + 1]
        assert np.all(np.diff(store.reference_times(np.arange(start, end))) >= 0)


def test_region_prefix_sums_restart_per_node():
    store = build_index([(A, B, 1), (A, C, 3), (B, C, 100), (B, D, 101)])
    node_a, node_b = store.internal_id(A), store.internal_id(B)
    a_start, b_start = store.node_offsets[node_a], store.node_offsets[node_b]
    assert store.forward_prefix[a_start + 1] == pytest.approx(np.exp(-2.0) + 1.0)
    assert store.forward_prefix[b_start] == pytest.approx(np.exp(-1.0))
    assert store.backward_prefix[b_start + 1] == pytest.approx(1.0 + np.exp(-1.0))


@pytest.mark.parametrize(
    ("mode", "expected"),
    [
        (DirectionMode.DIRECTED_FORWARD, [True, False]),
        (DirectionMode.DIRECTED_BACKWARD, [False, True]),
        (DirectionMode.UNDIRECTED, [True, True]),
    ],
)
def test_adjacency_follows_the_direction_of_travel(mode, expected):
    store = build_index([(A, B, 1), (A, B, 4), (C, D, 9)], mode)
    a, b = store.internal_id(A), store.internal_id(B)
    found, position = store.adjacency.lookup([a, b], [b, a])
    assert found.tolist() == expected
    hit = int(np.flatnonzero(found)[0])
    assert (store.adjacency.min_times[position[hit]], store.adjacency.max_times[position[hit]]) == (1, 4)

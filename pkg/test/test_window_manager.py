import os
import unittest
from unittest.mock import patch

import numpy as np
import pytest

from tempowalk.edge_store import DirectionMode, EdgeBatch
from tempowalk.errors import ConfigError, ContractViolationError, InvalidEdgeError
from tempowalk.stage_timer import StageTimer
from tempowalk.synthetic import uniform_temporal_graph
from tempowalk.window_manager import WindowConfig, empty_window, ingest_batch, window_bounds


def _times(state):
    return sorted(state.store.times.tolist())


class TestWindowConfig(unittest.TestCase):
    def test_rejects_non_positive_duration(self):
        with pytest.raises(ConfigError):
            WindowConfig(duration=0)
        with pytest.raises(ConfigError):
            WindowConfig(duration=10, weight_scale=-1.0)

    def test_cutoff_clamps_at_zero(self):
        assert WindowConfig(duration=10).cutoff(7) == 0
        assert WindowConfig(duration=10).cutoff(30) == 20
        assert WindowConfig().cutoff(10**12) == 0


class TestIngestBatch(unittest.TestCase):
    def setUp(self):
        self.config = WindowConfig(duration=10)
        self.state = ingest_batch(empty_window(self.config), EdgeBatch.from_edges([(1, 2, 16), (2, 3, 21), (3, 4, 25)]))

    def test_evicts_and_drops_late_edges(self):
        state = ingest_batch(self.state, [(5, 6, 30), (4, 5, 18), (6, 7, 26)])
        stats = state.last_batch_stats
        assert state.t_high == 30
        assert window_bounds(state) == (20, 30)
        assert _times(state) == [21, 25, 26, 30]
        assert stats.ingested == 3
        assert stats.dropped_late == 1
        assert stats.admitted == 2
        assert stats.evicted == 1
        assert stats.retained == state.store.edge_count == 4

    def test_edges_at_the_cutoff_are_retained(self):
        state = ingest_batch(self.state, [(7, 8, 31)])
        assert window_bounds(state) == (21, 31)
        assert _times(state) == [21, 25, 31]

    def test_all_late_batch_only_evicts(self):
        state = ingest_batch(self.state, [(1, 1, 3), (1, 1, 4)])
        assert state.t_high == 25
        assert state.last_batch_stats.dropped_late == 2
        assert _times(state) == [16, 21, 25]

    def test_batch_inside_the_window_does_not_advance(self):
        state = ingest_batch(self.state, [(8, 9, 22)])
        assert state.t_high == 25
        assert _times(state) == [16, 21, 22, 25]

    def test_empty_batch_only_counts(self):
        state = ingest_batch(self.state, [])
        assert state.store is self.state.store
        assert state.t_high == self.state.t_high
        assert state.batch_count == self.state.batch_count + 1
        assert state.last_batch_stats.ingested == 0

    def test_previous_snapshot_is_untouched(self):
        before = self.state.store
        state = ingest_batch(self.state, [(5, 6, 40)])
        assert state.previous_store is before
        assert _times(self.state) == [16, 21, 25]
        assert _times(state) == [40]

    def test_unsorted_first_batch(self):
        times = np.random.default_rng(0).permutation(np.arange(1, 101))
        state = ingest_batch(empty_window(self.config), EdgeBatch.from_arrays(times % 7, times % 5, times))
        assert _times(state) == list(range(90, 101))

    def test_rejects_negative_edges(self):
        with pytest.raises(InvalidEdgeError):
            ingest_batch(self.state, [(1, 2, -5)])

    def test_records_stage_timings(self):
        timer = StageTimer()
        ingest_batch(self.state, [(1, 2, 26)], timer=timer)
        assert [summary.stage for summary in timer.summaries()] == ["sort", "evict", "merge", "index"]

    def test_config_override(self):
        state = ingest_batch(self.state, [(1, 2, 26)], WindowConfig(duration=2))
        assert state.config.duration == 2
        assert _times(state) == [25, 26]

    def test_direction_mode_is_carried_into_snapshots(self):
        state = ingest_batch(empty_window(WindowConfig(direction_mode=DirectionMode.UNDIRECTED)), [(1, 2, 3)])
        assert state.store.reference_count == 2

    @patch.dict(os.environ, {"TEMPOWALK_TRACE_MEMORY": "1"})
    def test_traced_peak_bytes(self):
        state = ingest_batch(self.state, uniform_temporal_graph(50, 5000, 10, seed=1))
        assert state.last_batch_stats.peak_bytes > 0


def test_window_bounds_before_ingest_is_rejected():
    with pytest.raises(ContractViolationError):
        window_bounds(empty_window(WindowConfig(duration=5)))


def test_single_edge_window_clamps_low_bound():
    state = ingest_batch(empty_window(WindowConfig(duration=10)), [(3, 4, 7)])
    assert window_bounds(state) == (0, 7)


def test_store_matches_brute_force_filter_over_a_stream():
    config = WindowConfig(duration=150)
    state = empty_window(config)
    seen = []
    rng = np.random.default_rng(5)
    for index in range(12):
        batch = uniform_temporal_graph(30, 200, 100, seed=index)
        # Shift each batch forward, with some overlap and some late stragglers
        shifted = EdgeBatch(batch.sources, batch.targets, batch.times + index * 60 + rng.integers(-40, 40))
        shifted = EdgeBatch(shifted.sources, shifted.targets, np.maximum(shifted.times, 0))
        previous_cutoff = config.cutoff(state.t_high) if state.t_high is not None else 0
        state = ingest_batch(state, shifted)
        cutoff, t_high = window_bounds(state)
        seen = [edge for edge in seen if edge[2] >= cutoff]
        seen.extend(edge for edge in shifted.to_edges() if edge.time >= cutoff)
        assert previous_cutoff <= cutoff
        assert sorted(state.store.external_edges().to_edges()) == sorted(seen)
        assert all(cutoff <= t <= t_high for t in state.store.times.tolist())


def test_peak_bytes_stays_flat_under_a_constant_window():
    config = WindowConfig(duration=5 * 1000)
    state = empty_window(config)
    peaks = []
    for index in range(30):
        batch = uniform_temporal_graph(100, 1000, 1000, seed=index)
        state = ingest_batch(state, EdgeBatch(batch.sources, batch.targets, batch.times + index * 1000))
        peaks.append(state.last_batch_stats.peak_bytes)
    steady = np.array(peaks[10:], dtype=np.float64)
    assert steady.max() / steady.min() < 1.05

from pathlib import Path

import pytest

from tempowalk.config import RunConfig
from tempowalk.edge_io import FileFormat
from tempowalk.edge_store import DirectionMode, WalkDirection
from tempowalk.errors import ConfigError
from tempowalk.walk_engine import Variant, WalkConfig


class TestRunConfig:
    def test_coerces_fields(self):
        config = RunConfig("edges.txt", variant="fullwalk", output_format="binary")
        assert config.input_path == Path("edges.txt")
        assert config.variant is Variant.FULLWALK
        assert config.output_format is FileFormat.BINARY

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"batch_duration": 0},
            {"batch_duration": 10, "window_duration": 5},
            {"arrival_interval": 0.0},
        ],
    )
    def test_rejects_invalid_settings(self, kwargs):
        with pytest.raises(ConfigError):
            RunConfig("edges.txt", **kwargs)

    def test_window_equal_to_batch_is_allowed(self):
        assert RunConfig("edges.txt", batch_duration=10, window_duration=10).window_duration == 10

    @pytest.mark.parametrize(
        ("undirected", "direction", "expected"),
        [
            (False, WalkDirection.FORWARD, DirectionMode.DIRECTED_FORWARD),
            (False, WalkDirection.BACKWARD, DirectionMode.DIRECTED_BACKWARD),
            (True, WalkDirection.FORWARD, DirectionMode.UNDIRECTED),
            (True, WalkDirection.BACKWARD, DirectionMode.UNDIRECTED),
        ],
    )
    def test_direction_mode(self, undirected, direction, expected):
        config = RunConfig("edges.txt", undirected=undirected, walk=WalkConfig(direction=direction))
        assert config.direction_mode is expected
        assert config.window_config().direction_mode is expected

    def test_window_config(self):
        window = RunConfig("edges.txt", window_duration=50, weight_scale=2.0).window_config()
        assert window.duration == 50
        assert window.weight_scale == 2.0


class TestWithTimeSpan:
    def test_defaults_to_a_third_of_the_span(self):
        assert RunConfig("edges.txt", batch_duration=10).with_time_span(300).window_duration == 100

    def test_default_is_at_least_one_batch(self):
        assert RunConfig("edges.txt", batch_duration=10).with_time_span(6).window_duration == 10

    def test_explicit_window_is_kept(self):
        config = RunConfig("edges.txt", batch_duration=10, window_duration=40)
        assert config.with_time_span(300) is config

    def test_unbatched_input_stays_unbounded(self):
        config = RunConfig("edges.txt")
        assert config.with_time_span(300).window_duration is None

from dataclasses import dataclass, field, replace
from pathlib import Path

from tempowalk.edge_io import FileFormat
from tempowalk.edge_store import DirectionMode, WalkDirection
from tempowalk.errors import ConfigError
from tempowalk.walk_engine import TierThresholds, Variant, WalkConfig
from tempowalk.window_manager import WindowConfig

# The default window spans this fraction of the input's time span
DEFAULT_WINDOW_FRACTION = 3


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a `walk` or `replay` command needs.

    `batch_duration=None` ingests the whole input as one batch. `window_duration=None` keeps every edge in bulk
    mode; in replay it defaults to a third of the input's time span.
    """

    input_path: Path
    batch_duration: int | None = None
    window_duration: int | None = None
    undirected: bool = False
    weight_scale: float = 1.0
    walk: WalkConfig = field(default_factory=WalkConfig)
    thresholds: TierThresholds = field(default_factory=TierThresholds)
    variant: Variant = Variant.COOP
    workers: int | None = None
    output_path: Path | None = None
    output_format: FileFormat = FileFormat.TEXT
    stats_path: Path | None = None
    arrival_interval: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_path", Path(self.input_path))
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "output_format", FileFormat(self.output_format))
        if self.batch_duration is not None and self.batch_duration <= 0:
            msg = f"batch duration must be positive, got {self.batch_duration}"
            raise ConfigError(msg)
        if (
            self.batch_duration is not None
            and self.window_duration is not None
            and self.window_duration < self.batch_duration
        ):
            msg = (
                f"window duration ({self.window_duration}) must be at least the batch duration"
                f" ({self.batch_duration}) when streaming"
            )
            raise ConfigError(msg)
        if self.arrival_interval is not None and self.arrival_interval <= 0:
            msg = f"arrival interval must be positive, got {self.arrival_interval}"
            raise ConfigError(msg)

    @property
    def direction_mode(self) -> DirectionMode:
        if self.undirected:
            return DirectionMode.UNDIRECTED
        if self.walk.direction is WalkDirection.BACKWARD:
            return DirectionMode.DIRECTED_BACKWARD
        return DirectionMode.DIRECTED_FORWARD

    def window_config(self) -> WindowConfig:
        return WindowConfig(self.window_duration, self.direction_mode, self.weight_scale)

    def with_time_span(self, time_span: int) -> "RunConfig":
        """
        Fills in the default window for an input spanning `time_span` time units. Without a batch duration the
        input is a single batch and the window stays unbounded.
        """
        if self.window_duration is not None or self.batch_duration is None:
            return self
        window = max(time_span // DEFAULT_WINDOW_FRACTION, self.batch_duration or 1, 1)
        return replace(self, window_duration=window)

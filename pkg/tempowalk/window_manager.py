"""
Sliding-window ingestion.

Every batch is sorted, merged with the retained edges of the current snapshot, and the dual index is rebuilt in
bulk over the result. Edges older than `t_high - duration` are evicted from the snapshot, and batch edges that are
already older than that cutoff are dropped as late without retraction.
"""

import time
import tracemalloc
from dataclasses import dataclass, replace
from typing import Any, NamedTuple

import numpy as np

from tempowalk.edge_store import DirectionMode, EdgeBatch, EdgeStore, TemporalEdge, build_index
from tempowalk.errors import ConfigError, ContractViolationError
from tempowalk.stage_timer import StageTimer
from tempowalk.utils import bool_env
from tempowalk.walk_logging import log_debug, log_info


@dataclass(frozen=True)
class WindowConfig:
    """
    Window duration in edge-time units (`None` keeps every edge, which is bulk mode), the direction mode of the
    snapshots, and the timescale of their precomputed exponential weights.
    """

    duration: int | None = None
    direction_mode: DirectionMode = DirectionMode.DIRECTED_FORWARD
    weight_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.duration is not None and self.duration <= 0:
            msg = f"window duration must be positive, got {self.duration}"
            raise ConfigError(msg)
        if not self.weight_scale > 0:
            msg = f"weight_scale must be positive, got {self.weight_scale}"
            raise ConfigError(msg)
        object.__setattr__(self, "direction_mode", DirectionMode(self.direction_mode))

    def cutoff(self, t_high: int) -> int:
        if self.duration is None:
            return 0
        return max(t_high - self.duration, 0)


class BatchStats(NamedTuple):
    batch_index: int
    ingested: int
    dropped_late: int
    evicted: int
    retained: int
    rebuild_duration: float
    peak_bytes: int
    resident_bytes: int
    t_low: int | None
    t_high: int | None

    @property
    def admitted(self) -> int:
        return self.ingested - self.dropped_late

    def as_record(self) -> dict[str, Any]:
        record = self._asdict()
        record["admitted"] = self.admitted
        return record


@dataclass(frozen=True, eq=False)
class WindowState:
    """
    The current snapshot plus the one it replaced, which stays alive for readers that still hold it.
    """

    config: WindowConfig
    store: EdgeStore
    t_high: int | None = None
    batch_count: int = 0
    last_batch_stats: BatchStats | None = None
    previous_store: EdgeStore | None = None


def empty_window(config: WindowConfig) -> WindowState:
    return WindowState(config, build_index(EdgeBatch.empty(), config.direction_mode, weight_scale=config.weight_scale))


def window_bounds(state: WindowState) -> tuple[int, int]:
    """
    Returns `(t_low, t_high)`, with `t_low` clamped at zero.

    Raises:
        ContractViolationError: If no edge has been ingested yet.
    """
    if state.t_high is None:
        msg = "window bounds are undefined before the first non-empty batch"
        raise ContractViolationError(msg)
    return state.config.cutoff(state.t_high), state.t_high


def ingest_batch(
    state: WindowState,
    batch: EdgeBatch | list[TemporalEdge],
    config: WindowConfig | None = None,
    *,
    timer: StageTimer | None = None,
) -> WindowState:
    """
    Merges one batch into the window and rebuilds the snapshot.

    Args:
        state: The current window state. It is not modified.
        batch: The batch edges, in any order.
        config: Overrides the configuration carried by `state`.
        timer: Receives the sort, evict, merge and index stage timings.

    Returns:
        The new window state.
    """
    config = config or state.config
    timer = timer or StageTimer()
    batch = EdgeBatch.coerce(batch)
    batch.validate()
    batch_index = state.batch_count

    if not len(batch):
        stats = BatchStats(
            batch_index=batch_index,
            ingested=0,
            dropped_late=0,
            evicted=0,
            retained=state.store.edge_count,
            rebuild_duration=0.0,
            peak_bytes=state.store.nbytes,
            resident_bytes=state.store.nbytes,
            t_low=config.cutoff(state.t_high) if state.t_high is not None else None,
            t_high=state.t_high,
        )
        return replace(state, config=config, batch_count=batch_index + 1, last_batch_stats=stats)

    tracing = bool_env("TEMPOWALK_TRACE_MEMORY")
    if tracing:
        if not tracemalloc.is_tracing():
            tracemalloc.start()
        tracemalloc.reset_peak()

    started = time.perf_counter()
    with timer.stage("sort", items=len(batch)):
        batch = batch.time_sorted()
    batch_max = int(batch.times[-1])
    t_high = batch_max if state.t_high is None else max(state.t_high, batch_max)
    cutoff = config.cutoff(t_high)

    old = state.store
    with timer.stage("evict", items=old.edge_count):
        first_kept_group = int(np.searchsorted(old.ts_group_times, cutoff, side="left"))
        cut = int(old.ts_group_offsets[first_kept_group]) if old.ts_group_count else 0
        late = int(np.searchsorted(batch.times, cutoff, side="left"))
    with timer.stage("merge", items=old.edge_count - cut + len(batch) - late):
        merged = EdgeBatch.concatenate([old.external_edges(cut), batch.take(slice(late, None))])
    with timer.stage("index", items=len(merged)):
        store = build_index(merged, config.direction_mode, weight_scale=config.weight_scale)
    rebuild_duration = time.perf_counter() - started

    if tracing:
        _, peak_bytes = tracemalloc.get_traced_memory()
    else:
        peak_bytes = store.nbytes + old.nbytes

    stats = BatchStats(
        batch_index=batch_index,
        ingested=len(batch),
        dropped_late=late,
        evicted=cut,
        retained=store.edge_count,
        rebuild_duration=rebuild_duration,
        peak_bytes=int(peak_bytes),
        resident_bytes=store.nbytes,
        t_low=cutoff,
        t_high=t_high,
    )
    if late:
        log_debug("Dropped late edges", batch_index=batch_index, dropped_late=late, cutoff=cutoff)
    log_info("Ingested batch", **stats.as_record())
    return WindowState(
        config=config,
        store=store,
        t_high=t_high,
        batch_count=batch_index + 1,
        last_batch_stats=stats,
        previous_store=old,
    )

"""
This module provides a timer that records the wall time of named pipeline stages (index sorts, compaction,
regrouping, tier execution, ...), so that ingestion and walk generation can report where their time went.
"""

import contextlib
import time
from collections.abc import Iterator
from typing import NamedTuple


class StageTiming(NamedTuple):
    """
    Represents a single execution of a pipeline stage.

    Attributes:
    - stage: The name of the stage.
    - duration: The wall time spent in the stage, in seconds.
    - items: The number of items (edges, walks, tasks) the stage processed.
    """

    stage: str
    duration: float
    items: int


class StageSummary(NamedTuple):
    """
    Represents all executions of one pipeline stage, aggregated.

    Attributes:
    - stage: The name of the stage.
    - execution_count: The number of times the stage ran.
    - total_duration: The total wall time spent in the stage, in seconds.
    - total_items: The total number of items the stage processed.
    """

    stage: str
    execution_count: int
    total_duration: float
    total_items: int


class StageTimer:
    """
    Collects `StageTiming` records. A timer is owned by one pipeline run and is not shared between threads.

    Example usage:
    ```
    timer = StageTimer()
    with timer.stage("sort", items=len(edges)):
        order = np.lexsort(...)
    timer.summaries()
    ```
    """

    def __init__(self) -> None:
        self._timings: list[StageTiming] = []

    @contextlib.contextmanager
    def stage(self, name: str, items: int = 0) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        finally:
            self._timings.append(StageTiming(name, time.perf_counter() - started, int(items)))

    def record(self, name: str, duration: float, items: int = 0) -> None:
        self._timings.append(StageTiming(name, duration, int(items)))

    @property
    def timings(self) -> list[StageTiming]:
        return list(self._timings)

    def total(self) -> float:
        return sum(timing.duration for timing in self._timings)

    def summaries(self) -> list[StageSummary]:
        from tempowalk.utils import aggregate_stage_timings

        return aggregate_stage_timings(self._timings)

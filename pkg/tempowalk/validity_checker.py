"""
Post-hoc causality auditing of walks.

The checker works from the raw edge list, independently of `EdgeStore`, so it can audit walks produced by any
engine: timed walks are checked hop by hop, untimed node sequences get a greedy earliest-feasible timestamp
assignment.
"""

import bisect
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from tempowalk.edge_store import EdgeBatch, WalkDirection
from tempowalk.primitives import run_starts

TimedHop = tuple[int, int | None]


class EdgeOracle:
    """
    Maps every `(source, target)` pair to the sorted timestamps of its edges. Undirected oracles also answer for
    the reversed pair.
    """

    def __init__(self, pair_times: dict[tuple[int, int], list[int]], *, undirected: bool = False) -> None:
        self._pair_times = pair_times
        self.undirected = undirected

    @classmethod
    def from_batch(cls, batch: EdgeBatch, *, undirected: bool = False) -> "EdgeOracle":
        sources, targets, times = batch.sources, batch.targets, batch.times
        if undirected:
            sources, targets = np.concatenate((sources, targets)), np.concatenate((targets, sources))
            times = np.concatenate((times, times))
        order = np.lexsort((times, targets, sources))
        sources, targets, times = sources[order], targets[order], times[order]
        starts = run_starts(sources, targets).tolist()
        ends = [*starts[1:], int(times.size)] if starts else []
        time_list = times.tolist()
        pair_times = {
            (int(sources[start]), int(targets[start])): time_list[start:end]
            for start, end in zip(starts, ends, strict=True)
        }
        return cls(pair_times, undirected=undirected)

    def times(self, source: int, target: int) -> list[int]:
        return self._pair_times.get((source, target), [])

    def has_edge(self, source: int, target: int, time: int) -> bool:
        times = self.times(source, target)
        position = bisect.bisect_left(times, time)
        return position < len(times) and times[position] == time

    def first_after(self, source: int, target: int, after: int | None, *, strict: bool = True) -> int | None:
        times = self.times(source, target)
        if not times:
            return None
        if after is None:
            return times[0]
        position = bisect.bisect_right(times, after) if strict else bisect.bisect_left(times, after)
        return times[position] if position < len(times) else None

    def last_before(self, source: int, target: int, before: int | None, *, strict: bool = True) -> int | None:
        times = self.times(source, target)
        if not times:
            return None
        if before is None:
            return times[-1]
        position = bisect.bisect_left(times, before) if strict else bisect.bisect_right(times, before)
        return times[position - 1] if position > 0 else None


class WalkCheck(NamedTuple):
    """
    Per-hop validity of one walk; hop j connects slot j to slot j + 1.
    """

    hop_validity: list[bool]

    @property
    def total_hops(self) -> int:
        return len(self.hop_validity)

    @property
    def valid_hops(self) -> int:
        return sum(self.hop_validity)

    @property
    def valid(self) -> bool:
        return all(self.hop_validity)

    @property
    def first_violation(self) -> int | None:
        for hop, ok in enumerate(self.hop_validity):
            if not ok:
                return hop
        return None


@dataclass
class ValidityReport:
    total_walks: int = 0
    valid_walks: int = 0
    total_hops: int = 0
    valid_hops: int = 0
    first_violation_per_walk: list[int | None] = field(default_factory=list)

    @property
    def valid_hop_percent(self) -> float:
        return 100.0 if not self.total_hops else 100.0 * self.valid_hops / self.total_hops

    @property
    def valid_walk_percent(self) -> float:
        return 100.0 if not self.total_walks else 100.0 * self.valid_walks / self.total_walks

    def as_record(self) -> dict[str, Any]:
        return {
            "total_walks": self.total_walks,
            "valid_walks": self.valid_walks,
            "total_hops": self.total_hops,
            "valid_hops": self.valid_hops,
            "valid_walk_percent": self.valid_walk_percent,
            "valid_hop_percent": self.valid_hop_percent,
            "invalid_walks": [
                walk for walk, violation in enumerate(self.first_violation_per_walk) if violation is not None
            ],
        }


def _time_ordered(previous: int | None, current: int | None, direction: WalkDirection, strict: bool) -> bool:
    if previous is None:
        return True
    if current is None:
        return False
    if direction is WalkDirection.FORWARD:
        return current > previous if strict else current >= previous
    return current < previous if strict else current <= previous


def check_timed_walk(
    walk: Sequence[TimedHop],
    edges: EdgeOracle,
    *,
    direction: WalkDirection = WalkDirection.FORWARD,
    strict: bool = True,
) -> WalkCheck:
    """
    Checks every hop of a timed walk: the hop must be an edge at its recorded time, and times must strictly
    increase along a forward walk (strictly decrease along a backward one). A leading `None` time is unconstrained.

    Backward walks traverse edges against their orientation, so hop j must be the edge node_{j+1} -> node_j.
    """
    validity = []
    for (node, previous_time), (next_node, next_time) in zip(walk, walk[1:], strict=False):
        source, target = (node, next_node) if direction is WalkDirection.FORWARD else (next_node, node)
        is_edge = next_time is not None and edges.has_edge(source, target, next_time)
        validity.append(is_edge and _time_ordered(previous_time, next_time, direction, strict))
    return WalkCheck(validity)


def check_untimed_walk_greedy(
    nodes: Sequence[int],
    edges: EdgeOracle,
    *,
    direction: WalkDirection = WalkDirection.FORWARD,
    strict: bool = True,
) -> WalkCheck:
    """
    Assigns every hop the earliest timestamp after the previous assignment (the latest one before it, for backward
    walks). The walk is valid iff every hop gets an assignment.

    After an infeasible hop, the hop is marked invalid and the assignment restarts from that hop's earliest edge
    (latest, backward), so later hops are still scored.
    """
    forward = direction is WalkDirection.FORWARD
    validity = []
    assigned: int | None = None
    for node, next_node in zip(nodes, nodes[1:], strict=False):
        source, target = (node, next_node) if forward else (next_node, node)
        if forward:
            candidate = edges.first_after(source, target, assigned, strict=strict)
        else:
            candidate = edges.last_before(source, target, assigned, strict=strict)
        if candidate is not None:
            validity.append(True)
            assigned = candidate
            continue
        validity.append(False)
        pair_times = edges.times(source, target)
        assigned = (pair_times[0] if forward else pair_times[-1]) if pair_times else None
    return WalkCheck(validity)


def summarize(reports: Iterable[WalkCheck]) -> ValidityReport:
    """
    Aggregates per-walk checks. An empty input is 100% valid.
    """
    summary = ValidityReport()
    for report in reports:
        summary.total_walks += 1
        summary.valid_walks += int(report.valid)
        summary.total_hops += report.total_hops
        summary.valid_hops += report.valid_hops
        summary.first_violation_per_walk.append(report.first_violation)
    return summary


def check_walks(
    walks: Iterable[Sequence[TimedHop]],
    edges: EdgeOracle,
    *,
    direction: WalkDirection = WalkDirection.FORWARD,
    strict: bool = True,
    timed: bool = True,
) -> ValidityReport:
    """
    Checks a collection of walks. With `timed=False` the recorded times are ignored and the greedy assignment is
    used instead.
    """
    if timed:
        return summarize(check_timed_walk(walk, edges, direction=direction, strict=strict) for walk in walks)
    return summarize(
        check_untimed_walk_greedy([node for node, _ in walk], edges, direction=direction, strict=strict)
        for walk in walks
    )

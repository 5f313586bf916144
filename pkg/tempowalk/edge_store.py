"""
The dual-index edge store.

One shared edge array, sorted by (time, source, target, input ordinal), is exposed through two offset views:

- the timestamp-grouped view (`ts_group_offsets`) locates every distinct-timestamp slice of the global array;
- the node-and-timestamp-grouped view keys a permutation of edge references by node (`node_offsets`,
  `node_edge_refs`) and splits every node's region into distinct-timestamp sub-groups (`node_group_ptr`,
  `node_group_offsets`, `node_group_times`).

External node ids are densified into contiguous internal ids at build time. Stores are immutable once built.
"""

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, fields
from functools import cached_property
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from tempowalk.errors import ConfigError, ContractViolationError, InvalidEdgeError
from tempowalk.primitives import offsets_from_counts, run_starts, segmented_searchsorted

IndexArray = npt.NDArray[np.int64]

# Printed as "-" in walk output; marks a slot that carries no timestamp
NO_TIME = np.iinfo(np.int64).min
# Query times standing in for -inf / +inf on a walk's first hop
TIME_NEG_INF = np.iinfo(np.int64).min
TIME_POS_INF = np.iinfo(np.int64).max


class DirectionMode(enum.StrEnum):
    DIRECTED_FORWARD = "directed-forward"
    DIRECTED_BACKWARD = "directed-backward"
    UNDIRECTED = "undirected"


class WalkDirection(enum.StrEnum):
    FORWARD = "forward"
    BACKWARD = "backward"


class TemporalEdge(NamedTuple):
    source: int
    target: int
    time: int


class NeighborRange(NamedTuple):
    """
    A half-open range `[start, end)` into `EdgeStore.node_edge_refs`, spanning `group_count` distinct timestamps.
    """

    start: int
    end: int
    group_count: int

    @property
    def size(self) -> int:
        return self.end - self.start

    @property
    def empty(self) -> bool:
        return self.start == self.end


@dataclass(frozen=True, eq=False)
class EdgeBatch:
    """
    A batch of edges held as three parallel int64 arrays, in whatever order they were produced.
    """

    sources: IndexArray
    targets: IndexArray
    times: IndexArray

    @classmethod
    def from_arrays(cls, sources: npt.ArrayLike, targets: npt.ArrayLike, times: npt.ArrayLike) -> "EdgeBatch":
        sources = np.asarray(sources, dtype=np.int64).reshape(-1)
        targets = np.asarray(targets, dtype=np.int64).reshape(-1)
        times = np.asarray(times, dtype=np.int64).reshape(-1)
        if not (sources.size == targets.size == times.size):
            msg = f"edge arrays differ in length: {sources.size}, {targets.size}, {times.size}"
            raise InvalidEdgeError(msg)
        return cls(sources, targets, times)

    @classmethod
    def from_edges(cls, edges: Iterable[TemporalEdge | Sequence[int]]) -> "EdgeBatch":
        triples = np.array([tuple(edge) for edge in edges], dtype=np.int64).reshape(-1, 3)
        return cls.from_arrays(triples[:, 0], triples[:, 1], triples[:, 2])

    @classmethod
    def empty(cls) -> "EdgeBatch":
        return cls.from_arrays([], [], [])

    @classmethod
    def coerce(cls, edges: "EdgeBatch | Iterable[TemporalEdge | Sequence[int]]") -> "EdgeBatch":
        if isinstance(edges, EdgeBatch):
            return edges
        return cls.from_edges(edges)

    @classmethod
    def concatenate(cls, batches: Sequence["EdgeBatch"]) -> "EdgeBatch":
        if not batches:
            return cls.empty()
        return cls(
            np.concatenate([batch.sources for batch in batches]),
            np.concatenate([batch.targets for batch in batches]),
            np.concatenate([batch.times for batch in batches]),
        )

    def __len__(self) -> int:
        return int(self.times.size)

    def take(self, indices: npt.ArrayLike) -> "EdgeBatch":
        return EdgeBatch(self.sources[indices], self.targets[indices], self.times[indices])

    def time_sorted(self) -> "EdgeBatch":
        """
        Returns the batch sorted by (time, source, target), keeping input order among identical edges.
        """
        return self.take(np.lexsort((self.targets, self.sources, self.times)))

    def validate(self) -> None:
        """
        Raises:
            InvalidEdgeError: If any node id or timestamp is negative.
        """
        for name in ("sources", "targets", "times"):
            values = getattr(self, name)
            if values.size and values.min() < 0:
                position = int(np.argmin(values))
                msg = f"edge {position} has a negative {name[:-1]}: {int(values[position])}"
                raise InvalidEdgeError(msg)

    def to_edges(self) -> list[TemporalEdge]:
        return [
            TemporalEdge(int(s), int(t), int(ts))
            for s, t, ts in zip(self.sources.tolist(), self.targets.tolist(), self.times.tolist(), strict=True)
        ]


class AdjacencyIndex(NamedTuple):
    """
    Sorted `(from, to)` pair keys with the earliest and latest timestamp of any edge between the pair.

    Keys are `from * node_count + to` over internal ids, oriented the way walks traverse the store: source to
    target for forward stores, target to source for backward stores, both orientations for undirected stores.
    """

    keys: IndexArray
    min_times: IndexArray
    max_times: IndexArray
    node_count: int

    def lookup(self, from_nodes: npt.ArrayLike, to_nodes: npt.ArrayLike) -> tuple[npt.NDArray[np.bool_], IndexArray]:
        """
        Returns, per pair, whether any edge joins it and the position of the pair in the index.
        """
        wanted = np.asarray(from_nodes, dtype=np.int64) * self.node_count + np.asarray(to_nodes, dtype=np.int64)
        positions = np.searchsorted(self.keys, wanted)
        clipped = np.minimum(positions, max(self.keys.size - 1, 0))
        found = (positions < self.keys.size) & (self.keys[clipped] == wanted) if self.keys.size else positions < 0
        return found, clipped


@dataclass(frozen=True, eq=False)
class EdgeStore:
    """
    Immutable dual-index snapshot over a shared, time-sorted edge array.

    Edge endpoints are stored as internal node ids; `node_ids[i]` is the external id of internal node `i`.
    Offset arrays carry a trailing total so that region `i` is always `offsets[i]:offsets[i + 1]`.
    """

    direction_mode: DirectionMode
    weight_scale: float
    node_ids: IndexArray
    sources: IndexArray
    targets: IndexArray
    times: IndexArray
    ts_group_offsets: IndexArray
    ts_group_times: IndexArray
    node_offsets: IndexArray
    node_edge_refs: IndexArray
    node_group_ptr: IndexArray
    node_group_offsets: IndexArray
    node_group_times: IndexArray
    forward_prefix: npt.NDArray[np.float64]
    backward_prefix: npt.NDArray[np.float64]

    @property
    def node_count(self) -> int:
        return int(self.node_ids.size)

    @property
    def edge_count(self) -> int:
        return int(self.times.size)

    @property
    def ts_group_count(self) -> int:
        return int(self.ts_group_times.size)

    @property
    def reference_count(self) -> int:
        return int(self.node_edge_refs.size)

    @property
    def nbytes(self) -> int:
        total = 0
        for field in fields(self):
            value = getattr(self, field.name)
            if isinstance(value, np.ndarray):
                total += value.nbytes
        return total

    @cached_property
    def node_group_counts(self) -> IndexArray:
        return np.diff(self.node_group_ptr)

    @cached_property
    def region_sizes(self) -> IndexArray:
        return np.diff(self.node_offsets)

    def supports(self, direction: WalkDirection) -> bool:
        if self.direction_mode is DirectionMode.UNDIRECTED:
            return True
        if direction is WalkDirection.FORWARD:
            return self.direction_mode is DirectionMode.DIRECTED_FORWARD
        return self.direction_mode is DirectionMode.DIRECTED_BACKWARD

    def internal_ids(self, external: npt.ArrayLike) -> IndexArray:
        """
        Maps external node ids to internal ids; unknown ids map to -1.
        """
        external = np.asarray(external, dtype=np.int64)
        positions = np.searchsorted(self.node_ids, external)
        clipped = np.minimum(positions, max(self.node_count - 1, 0))
        if not self.node_count:
            return np.full(external.shape, -1, dtype=np.int64)
        return np.where(self.node_ids[clipped] == external, clipped, -1).astype(np.int64)

    def internal_id(self, external: int) -> int:
        return int(self.internal_ids(np.array([external]))[0])

    def external_edges(self, start: int = 0, end: int | None = None) -> EdgeBatch:
        """
        Returns a slice of the shared edge array with external node ids, in stored order.
        """
        return EdgeBatch(
            self.node_ids[self.sources[start:end]],
            self.node_ids[self.targets[start:end]],
            self.times[start:end].copy(),
        )

    def step_targets(self, positions: npt.ArrayLike, current_nodes: npt.ArrayLike) -> IndexArray:
        """
        Returns the internal node reached by traversing the referenced edges away from `current_nodes`.
        """
        edges = self.node_edge_refs[np.asarray(positions, dtype=np.int64)]
        if self.direction_mode is DirectionMode.DIRECTED_FORWARD:
            return self.targets[edges]
        if self.direction_mode is DirectionMode.DIRECTED_BACKWARD:
            return self.sources[edges]
        sources = self.sources[edges]
        return np.where(sources == np.asarray(current_nodes, dtype=np.int64), self.targets[edges], sources)

    def reference_times(self, positions: npt.ArrayLike) -> IndexArray:
        return self.times[self.node_edge_refs[np.asarray(positions, dtype=np.int64)]]

    @cached_property
    def ts_group_forward_prefix(self) -> npt.NDArray[np.float64]:
        """
        Prefix sums of exp((t_g - t_max) / s) over timestamp groups, later groups heavier.
        """
        if not self.ts_group_count:
            return np.zeros(0, dtype=np.float64)
        shifted = (self.ts_group_times - self.ts_group_times[-1]).astype(np.float64) / self.weight_scale
        return np.cumsum(np.exp(shifted))

    @cached_property
    def ts_group_backward_prefix(self) -> npt.NDArray[np.float64]:
        """
        Prefix sums of exp((t_min - t_g) / s) over timestamp groups taken latest first, earlier groups heavier.
        """
        if not self.ts_group_count:
            return np.zeros(0, dtype=np.float64)
        shifted = (self.ts_group_times[0] - self.ts_group_times[::-1]).astype(np.float64) / self.weight_scale
        return np.cumsum(np.exp(shifted))

    @cached_property
    def adjacency(self) -> AdjacencyIndex:
        n = self.node_count
        if self.direction_mode is DirectionMode.DIRECTED_FORWARD:
            keys = self.sources * n + self.targets
            times = self.times
        elif self.direction_mode is DirectionMode.DIRECTED_BACKWARD:
            keys = self.targets * n + self.sources
            times = self.times
        else:
            keys = np.concatenate((self.sources * n + self.targets, self.targets * n + self.sources))
            times = np.concatenate((self.times, self.times))
        order = np.lexsort((times, keys))
        keys, times = keys[order], times[order]
        starts = run_starts(keys)
        ends = np.append(starts[1:], keys.size)
        return AdjacencyIndex(keys[starts], times[starts], times[ends - 1] if starts.size else times[:0], n)


def _region_prefix(
    ref_times: IndexArray,
    region_keys: IndexArray,
    node_offsets: IndexArray,
    anchor_times: IndexArray,
    sign: int,
    scale: float,
) -> npt.NDArray[np.float64]:
    """
    Region-local prefix sums of exp(sign * (t - anchor) / scale), restarting at every node region.
    """
    if not ref_times.size:
        return np.zeros(0, dtype=np.float64)
    weights = np.exp(sign * (ref_times - anchor_times[region_keys]).astype(np.float64) / scale)
    running = np.cumsum(weights)
    region_starts = node_offsets[region_keys]
    before = np.where(region_starts > 0, running[np.maximum(region_starts - 1, 0)], 0.0)
    return running - before


def build_index(
    edges: EdgeBatch | Iterable[TemporalEdge | Sequence[int]],
    mode: DirectionMode | str = DirectionMode.DIRECTED_FORWARD,
    *,
    weight_scale: float = 1.0,
) -> EdgeStore:
    """
    Builds a dual-index store over the given edges.

    Args:
        edges: The edges, in any order. External node ids and timestamps must be non-negative integers.
        mode: Which endpoint keys the node-grouped view.
        weight_scale: The timescale `s` of the exponential weights exp((t - t_min) / s) precomputed per node region.

    Returns:
        A new `EdgeStore`. Empty input yields a valid empty store.

    Raises:
        InvalidEdgeError: If an edge has a negative endpoint or timestamp.
    """
    mode = DirectionMode(mode)
    if not weight_scale > 0:
        msg = f"weight_scale must be positive, got {weight_scale}"
        raise ConfigError(msg)
    batch = EdgeBatch.coerce(edges)
    batch.validate()

    # lexsort is stable, so identical edges keep their input order
    order = np.lexsort((batch.targets, batch.sources, batch.times))
    node_ids, dense = np.unique(np.concatenate((batch.sources[order], batch.targets[order])), return_inverse=True)
    m = len(batch)
    sources = dense[:m].astype(np.int64)
    targets = dense[m:].astype(np.int64)
    times = batch.times[order]
    n = int(node_ids.size)

    ts_starts = run_starts(times)
    ts_group_offsets = np.append(ts_starts, m).astype(np.int64)
    ts_group_times = times[ts_starts]

    edge_refs = np.arange(m, dtype=np.int64)
    if mode is DirectionMode.DIRECTED_FORWARD:
        keys, refs = sources, edge_refs
    elif mode is DirectionMode.DIRECTED_BACKWARD:
        keys, refs = targets, edge_refs
    else:
        keys, refs = np.concatenate((sources, targets)), np.concatenate((edge_refs, edge_refs))
    # Edge refs ascend with time, so ordering by (node, ref) orders every region by time
    node_order = np.lexsort((refs, keys))
    region_keys = keys[node_order]
    node_edge_refs = refs[node_order]
    ref_times = times[node_edge_refs]

    node_offsets = offsets_from_counts(np.bincount(region_keys, minlength=n))
    group_starts = run_starts(region_keys, ref_times)
    node_group_offsets = np.append(group_starts, node_edge_refs.size).astype(np.int64)
    node_group_times = ref_times[group_starts]
    node_group_ptr = offsets_from_counts(np.bincount(region_keys[group_starts], minlength=n))

    nonempty = np.diff(node_offsets) > 0
    region_max = np.zeros(n, dtype=np.int64)
    region_min = np.zeros(n, dtype=np.int64)
    region_max[nonempty] = ref_times[node_offsets[1:][nonempty] - 1]
    region_min[nonempty] = ref_times[node_offsets[:-1][nonempty]]

    return EdgeStore(
        direction_mode=mode,
        weight_scale=float(weight_scale),
        node_ids=node_ids.astype(np.int64),
        sources=sources,
        targets=targets,
        times=times,
        ts_group_offsets=ts_group_offsets,
        ts_group_times=ts_group_times,
        node_offsets=node_offsets,
        node_edge_refs=node_edge_refs,
        node_group_ptr=node_group_ptr,
        node_group_offsets=node_group_offsets,
        node_group_times=node_group_times,
        forward_prefix=_region_prefix(ref_times, region_keys, node_offsets, region_max, 1, weight_scale),
        backward_prefix=_region_prefix(ref_times, region_keys, node_offsets, region_min, -1, weight_scale),
    )


def neighborhood_bounds(
    store: EdgeStore,
    nodes: npt.ArrayLike,
    times: npt.ArrayLike,
    direction: WalkDirection,
) -> tuple[IndexArray, IndexArray, IndexArray]:
    """
    Vectorized temporal neighborhood lookup over internal node ids, reading the shared group index directly.

    Returns:
        Per lane, the `[start, end)` range into `node_edge_refs` and the number of timestamp groups it spans.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    first_group = store.node_group_ptr[nodes]
    last_group = store.node_group_ptr[nodes + 1]
    if direction is WalkDirection.FORWARD:
        split = segmented_searchsorted(store.node_group_times, first_group, last_group, times, side="right")
        return store.node_group_offsets[split], store.node_offsets[nodes + 1], last_group - split
    split = segmented_searchsorted(store.node_group_times, first_group, last_group, times, side="left")
    return store.node_offsets[nodes], store.node_group_offsets[split], split - first_group


def temporal_neighborhood(
    store: EdgeStore,
    v: int,
    t: int,
    direction: WalkDirection | str = WalkDirection.FORWARD,
) -> NeighborRange:
    """
    Returns the edges at external node `v` strictly after `t` (forward) or strictly before `t` (backward).

    An unknown node yields an empty range.
    """
    direction = WalkDirection(direction)
    node = store.internal_id(v)
    if node < 0:
        return NeighborRange(0, 0, 0)
    start, end, groups = neighborhood_bounds(store, np.array([node]), np.array([t], dtype=np.int64), direction)
    return NeighborRange(int(start[0]), int(end[0]), int(groups[0]))


def neighborhood_edges(store: EdgeStore, neighbors: NeighborRange) -> list[TemporalEdge]:
    """
    Materializes a neighborhood as external-id edges, in region order.
    """
    edges = store.node_edge_refs[neighbors.start : neighbors.end]
    return store.external_edges().take(edges).to_edges()


def timestamp_group_count(store: EdgeStore, v: int) -> int:
    node = store.internal_id(v)
    if node < 0:
        return 0
    return int(store.node_group_counts[node])


def edge_slice_for_ts_group(store: EdgeStore, group_index: int) -> tuple[int, int]:
    """
    Returns the half-open slice of the shared edge array holding timestamp group `group_index`.

    Raises:
        ContractViolationError: If the group index is out of range.
    """
    if not 0 <= group_index < store.ts_group_count:
        msg = f"timestamp group {group_index} is out of range for a store with {store.ts_group_count} groups"
        raise ContractViolationError(msg)
    return int(store.ts_group_offsets[group_index]), int(store.ts_group_offsets[group_index + 1])

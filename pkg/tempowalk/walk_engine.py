"""
Temporal walk generation.

Walks advance one hop per scheduling step. Every step compacts the alive walks, regroups them by current node,
run-length encodes the groups and assigns each (node, W) run an execution tier on the dispatch plane:

- W < w_warp runs are solo work, batched many walks per work item;
- w_warp <= W <= block_dim runs are warp tasks, W > block_dim runs are block tasks;
- a cooperative task whose node has G <= cap timestamp groups copies the node's group metadata into task-local
  scratch once ("cached"), otherwise every lane searches the shared index ("direct");
- block runs with W > w_max are split into ceil(W / w_max) independent sub-tasks.

Every random draw is keyed by (seed, walk_id, hop_index, draw_ordinal), so the walks produced do not depend on
the tier a walk lands in, on work-item order, or on the number of workers. `generate_walks_fullwalk` advances
each walk to completion with no regrouping and produces the same walks.
"""

import enum
import time
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
import numpy.typing as npt

from tempowalk.edge_store import (
    NO_TIME,
    TIME_NEG_INF,
    TIME_POS_INF,
    EdgeStore,
    WalkDirection,
    neighborhood_bounds,
)
from tempowalk.errors import ConfigError
from tempowalk.primitives import (
    exclusive_scan,
    partition_flagged,
    run_length_encode,
    segmented_searchsorted,
    sort_pairs,
)
from tempowalk.rng import ORDINAL_PICK, ORDINAL_WITHIN_GROUP, CounterRNG
from tempowalk.samplers import (
    AdjacencyScope,
    BiasKind,
    Node2VecParams,
    node2vec_beta,
    pick_index,
    sample_start_edges,
)
from tempowalk.stage_timer import StageSummary, StageTimer
from tempowalk.utils import int_env
from tempowalk.walk_logging import log_debug, log_info

IndexArray = npt.NDArray[np.int64]

SOLO_CHUNK_SIZE = 4096
FULLWALK_CHUNK_SIZE = 4096


class StartMode(enum.StrEnum):
    PER_NODE = "per-node"
    SAMPLED = "sampled"


class Tier(enum.StrEnum):
    SOLO = "solo"
    WARP_CACHED = "warp-cached"
    WARP_DIRECT = "warp-direct"
    BLOCK_CACHED = "block-cached"
    BLOCK_DIRECT = "block-direct"

    @property
    def cached(self) -> bool:
        return self in (Tier.WARP_CACHED, Tier.BLOCK_CACHED)


class Variant(enum.StrEnum):
    COOP = "coop"
    COOP_DIRECT = "coop-direct"
    FULLWALK = "fullwalk"


@dataclass(frozen=True)
class TierThresholds:
    w_warp: int = 4
    block_dim: int = 256
    w_max: int = 8192
    g_warp_cap: int = 512
    g_block_cap: int = 4096

    def __post_init__(self) -> None:
        if not 1 <= self.w_warp <= self.block_dim <= self.w_max:
            msg = (
                "tier thresholds must satisfy 1 <= w_warp <= block_dim <= w_max,"
                f" got {self.w_warp}, {self.block_dim}, {self.w_max}"
            )
            raise ConfigError(msg)
        if not 0 <= self.g_warp_cap <= self.g_block_cap:
            msg = f"metadata caps must satisfy 0 <= g_warp_cap <= g_block_cap, got {self.g_warp_cap}, {self.g_block_cap}"
            raise ConfigError(msg)

    def tier_for(self, walks: int, groups: int, *, cache_metadata: bool = True) -> Tier:
        """
        Places one (W, G) run on the dispatch plane.
        """
        if walks < self.w_warp:
            return Tier.SOLO
        if walks <= self.block_dim:
            return Tier.WARP_CACHED if cache_metadata and groups <= self.g_warp_cap else Tier.WARP_DIRECT
        return Tier.BLOCK_CACHED if cache_metadata and groups <= self.g_block_cap else Tier.BLOCK_DIRECT


@dataclass(frozen=True)
class WalkConfig:
    """
    Walk generation settings.

    `walk_length` counts hops, so every walk occupies `walk_length + 1` node slots. Per-node starts launch
    `walks_per_node` walks from every node with a non-empty region; sampled starts launch `total_walks` walks from
    start edges drawn with `start_bias`.
    """

    walk_length: int = 80
    start_mode: StartMode = StartMode.PER_NODE
    walks_per_node: int = 10
    total_walks: int | None = None
    bias: BiasKind = BiasKind.EXPONENTIAL_INDEX
    start_bias: BiasKind = BiasKind.UNIFORM_INDEX
    node2vec: Node2VecParams | None = None
    adjacency_scope: AdjacencyScope = AdjacencyScope.WINDOW
    direction: WalkDirection = WalkDirection.FORWARD
    seed: int = 0

    def __post_init__(self) -> None:
        for name, enum_type in (
            ("start_mode", StartMode),
            ("bias", BiasKind),
            ("start_bias", BiasKind),
            ("adjacency_scope", AdjacencyScope),
            ("direction", WalkDirection),
        ):
            object.__setattr__(self, name, enum_type(getattr(self, name)))
        if self.walk_length < 1:
            msg = f"walk_length must be at least 1, got {self.walk_length}"
            raise ConfigError(msg)
        if self.walks_per_node < 1:
            msg = f"walks_per_node must be at least 1, got {self.walks_per_node}"
            raise ConfigError(msg)
        if self.start_mode is StartMode.SAMPLED and (self.total_walks is None or self.total_walks < 0):
            msg = f"sampled starts need a non-negative total_walks, got {self.total_walks}"
            raise ConfigError(msg)


@dataclass(eq=False)
class WalkStates:
    """
    Per-walk state, one entry per walk id. `prev_node` is -1 until the walk has taken a hop.
    """

    current_node: IndexArray
    current_time: IndexArray
    prev_node: IndexArray
    alive: npt.NDArray[np.bool_]
    hops_taken: IndexArray

    @classmethod
    def allocate(cls, walk_count: int) -> "WalkStates":
        return cls(
            current_node=np.zeros(walk_count, dtype=np.int64),
            current_time=np.zeros(walk_count, dtype=np.int64),
            prev_node=np.full(walk_count, -1, dtype=np.int64),
            alive=np.ones(walk_count, dtype=bool),
            hops_taken=np.zeros(walk_count, dtype=np.int64),
        )

    @property
    def walk_count(self) -> int:
        return int(self.alive.size)

    @property
    def alive_count(self) -> int:
        return int(np.count_nonzero(self.alive))


class WalkStats(NamedTuple):
    walks: int
    hops: int
    steps: int
    tier_task_counts: dict[str, int]
    multi_block_tasks: int
    wall_time: float
    stages: list[StageSummary]

    def as_record(self) -> dict[str, Any]:
        return {
            "walks": self.walks,
            "hops": self.hops,
            "steps": self.steps,
            "tier_task_counts": dict(self.tier_task_counts),
            "multi_block_tasks": self.multi_block_tasks,
            "walk_time": self.wall_time,
            "walk_stages": {stage.stage: stage.total_duration for stage in self.stages},
        }


@dataclass(eq=False)
class WalkSet:
    """
    Fixed-stride walk buffer. Row `i` holds walk `i`; slots `[0, lengths[i])` are populated with external node
    ids and timestamps, slot 0 carrying `NO_TIME`. Unused node slots are -1.
    """

    nodes: IndexArray
    times: IndexArray
    lengths: IndexArray
    direction: WalkDirection = WalkDirection.FORWARD
    stats: WalkStats | None = field(default=None, compare=False)

    @classmethod
    def allocate(cls, walk_count: int, walk_length: int, direction: WalkDirection) -> "WalkSet":
        return cls(
            nodes=np.full((walk_count, walk_length + 1), -1, dtype=np.int64),
            times=np.full((walk_count, walk_length + 1), NO_TIME, dtype=np.int64),
            lengths=np.zeros(walk_count, dtype=np.int64),
            direction=direction,
        )

    @property
    def walk_count(self) -> int:
        return int(self.lengths.size)

    @property
    def stride(self) -> int:
        return int(self.nodes.shape[1])

    @property
    def hop_count(self) -> int:
        return int(np.maximum(self.lengths - 1, 0).sum())

    def __len__(self) -> int:
        return self.walk_count

    def walk(self, index: int) -> list[tuple[int, int | None]]:
        length = int(self.lengths[index])
        return [
            (int(node), None if time_ == NO_TIME else int(time_))
            for node, time_ in zip(self.nodes[index, :length], self.times[index, :length], strict=True)
        ]

    def __iter__(self) -> Iterator[list[tuple[int, int | None]]]:
        for index in range(self.walk_count):
            yield self.walk(index)

    def same_walks(self, other: "WalkSet") -> bool:
        """
        Bitwise comparison of the walk contents, ignoring instrumentation.
        """
        return (
            self.direction == other.direction
            and np.array_equal(self.lengths, other.lengths)
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.times, other.times)
        )


@dataclass(frozen=True, eq=False)
class DispatchTask:
    """
    One unit of cooperative work: a slice of the walks at `node` (an internal id) during one step.
    """

    node: int
    tier: Tier
    walk_ids: IndexArray
    sub_task_index: int = 0


class TaskTable(NamedTuple):
    """
    Tasks of one cooperative tier; `starts`/`sizes` slice `DispatchPlan.order`.
    """

    nodes: IndexArray
    starts: IndexArray
    sizes: IndexArray
    sub_task_index: IndexArray

    def __len__(self) -> int:  # type: ignore[override]
        return int(self.nodes.size)

    @classmethod
    def empty(cls) -> "TaskTable":
        none = np.zeros(0, dtype=np.int64)
        return cls(none, none, none, none)


@dataclass(frozen=True, eq=False)
class DispatchPlan:
    """
    The output of one scheduling step: alive walks grouped by node, and every run placed on the dispatch plane.
    """

    order: IndexArray
    run_nodes: IndexArray
    run_lengths: IndexArray
    run_groups: IndexArray
    solo_runs: IndexArray
    solo_walks: IndexArray
    tables: dict[Tier, TaskTable]
    multi_block_tasks: int

    @property
    def alive_count(self) -> int:
        return int(self.order.size)

    def task_counts(self) -> dict[Tier, int]:
        counts = {Tier.SOLO: int(self.solo_runs.size)}
        counts.update({tier: len(table) for tier, table in self.tables.items()})
        return counts

    def tasks(self, tier: Tier) -> list[DispatchTask]:
        if tier is Tier.SOLO:
            offsets = exclusive_scan(self.run_lengths)
            return [
                DispatchTask(
                    int(self.run_nodes[run]),
                    Tier.SOLO,
                    self.order[offsets[run] : offsets[run] + self.run_lengths[run]],
                )
                for run in self.solo_runs
            ]
        table = self.tables[tier]
        return [
            DispatchTask(int(node), tier, self.order[start : start + size], int(sub))
            for node, start, size, sub in zip(table.nodes, table.starts, table.sizes, table.sub_task_index, strict=True)
        ]

    def task_lists(self) -> dict[Tier, list[DispatchTask]]:
        return {tier: self.tasks(tier) for tier in Tier}


def _check_direction(store: EdgeStore, config: WalkConfig) -> None:
    if not store.supports(config.direction):
        msg = f"{config.direction} walks cannot run on a {store.direction_mode} store"
        raise ConfigError(msg)


class _HopKernel:
    """
    Advances lanes of walks by one hop. Shared by every tier and by the full-walk baseline.
    """

    def __init__(self, store: EdgeStore, config: WalkConfig) -> None:
        self.store = store
        self.config = config
        self.rng = CounterRNG(config.seed)
        self.forward = config.direction is WalkDirection.FORWARD

    def bounds_direct(self, nodes: IndexArray, times: IndexArray) -> tuple[IndexArray, IndexArray]:
        lo, hi, _ = neighborhood_bounds(self.store, nodes, times, self.config.direction)
        return lo, hi

    def bounds_cached(self, node: int, times: IndexArray) -> tuple[IndexArray, IndexArray]:
        store = self.store
        first, last = int(store.node_group_ptr[node]), int(store.node_group_ptr[node + 1])
        # Task-local scratch, loaded once per task
        group_times = store.node_group_times[first:last].copy()
        group_offsets = store.node_group_offsets[first : last + 1].copy()
        if self.forward:
            split = np.searchsorted(group_times, times, side="right")
            return group_offsets[split], np.full(times.shape, store.node_offsets[node + 1], dtype=np.int64)
        split = np.searchsorted(group_times, times, side="left")
        return np.full(times.shape, store.node_offsets[node], dtype=np.int64), group_offsets[split]

    def propose(
        self,
        walk_ids: IndexArray,
        hops: IndexArray,
        ordinal: int,
        nodes: IndexArray,
        lo: IndexArray,
        hi: IndexArray,
    ) -> IndexArray:
        store = self.store
        u = self.rng.uniform(walk_ids, hops, ordinal)
        bias = self.config.bias
        if bias.is_index_based:
            offset = np.asarray(pick_index(bias, u, hi - lo), dtype=np.int64)
            return lo + offset if self.forward else hi - 1 - offset
        region_start = store.node_offsets[nodes]
        if self.forward:
            prefix = store.forward_prefix
            base = np.where(lo > region_start, prefix[np.maximum(lo - 1, 0)], 0.0)
            target = base + u * (prefix[hi - 1] - base)
        else:
            prefix = store.backward_prefix
            target = u * prefix[hi - 1]
        return np.minimum(segmented_searchsorted(prefix, lo, hi, target, side="left"), hi - 1)

    def adjacent(self, prev: IndexArray, candidates: IndexArray, times: IndexArray) -> npt.NDArray[np.bool_]:
        index = self.store.adjacency
        found, position = index.lookup(prev, candidates)
        if self.config.adjacency_scope is AdjacencyScope.FUTURE and index.keys.size:
            if self.forward:
                found &= index.max_times[position] > times
            else:
                found &= index.min_times[position] < times
        return found

    def draw(
        self,
        walk_ids: IndexArray,
        hops: IndexArray,
        nodes: IndexArray,
        times: IndexArray,
        prev: IndexArray,
        lo: IndexArray,
        hi: IndexArray,
    ) -> IndexArray:
        positions = self.propose(walk_ids, hops, ORDINAL_PICK, nodes, lo, hi)
        params = self.config.node2vec
        if params is None:
            return positions
        pending = np.flatnonzero(prev >= 0)
        attempt = 0
        while pending.size:
            candidates = self.store.step_targets(positions[pending], nodes[pending])
            adjacent = self.adjacent(prev[pending], candidates, times[pending])
            beta = node2vec_beta(prev[pending], candidates, adjacent, params)
            u = self.rng.uniform(walk_ids[pending], hops[pending], 2 * attempt + 1)
            pending = pending[u >= beta / params.beta_max]
            attempt += 1
            if params.max_attempts is not None and attempt >= params.max_attempts:
                break
            if pending.size:
                positions[pending] = self.propose(
                    walk_ids[pending],
                    hops[pending],
                    2 * attempt,
                    nodes[pending],
                    lo[pending],
                    hi[pending],
                )
        return positions

    def advance(
        self,
        walk_ids: IndexArray,
        lo: IndexArray,
        hi: IndexArray,
        states: WalkStates,
        walkset: WalkSet,
    ) -> None:
        """
        Takes one hop for every lane. Lanes with an empty neighborhood die without recording anything.
        """
        has_edges = hi > lo
        states.alive[walk_ids[~has_edges]] = False
        walk_ids, lo, hi = walk_ids[has_edges], lo[has_edges], hi[has_edges]
        if not walk_ids.size:
            return
        hops = states.hops_taken[walk_ids]
        nodes = states.current_node[walk_ids]
        times = states.current_time[walk_ids]
        positions = self.draw(walk_ids, hops, nodes, times, states.prev_node[walk_ids], lo, hi)

        next_nodes = self.store.step_targets(positions, nodes)
        next_times = self.store.reference_times(positions)
        slots = hops + 1
        walkset.nodes[walk_ids, slots] = self.store.node_ids[next_nodes]
        walkset.times[walk_ids, slots] = next_times
        walkset.lengths[walk_ids] = slots + 1
        states.prev_node[walk_ids] = nodes
        states.current_node[walk_ids] = next_nodes
        states.current_time[walk_ids] = next_times
        states.hops_taken[walk_ids] = slots
        states.alive[walk_ids] = slots < self.config.walk_length

    def run_direct(self, walk_ids: IndexArray, states: WalkStates, walkset: WalkSet) -> None:
        lo, hi = self.bounds_direct(states.current_node[walk_ids], states.current_time[walk_ids])
        self.advance(walk_ids, lo, hi, states, walkset)

    def run_task(self, task: DispatchTask, states: WalkStates, walkset: WalkSet) -> None:
        if task.tier.cached:
            lo, hi = self.bounds_cached(task.node, states.current_time[task.walk_ids])
            self.advance(task.walk_ids, lo, hi, states, walkset)
        else:
            self.run_direct(task.walk_ids, states, walkset)


def init_walks(store: EdgeStore, config: WalkConfig) -> tuple[WalkStates, WalkSet]:
    """
    Launches the walks and records hop 0 of each.

    Per-node starts take their first hop from the seed node with every edge of its region as a candidate.
    Sampled starts record the drawn start edge itself.

    Raises:
        ConfigError: If the walk direction does not match the store's direction mode.
    """
    _check_direction(store, config)
    kernel = _HopKernel(store, config)
    forward = config.direction is WalkDirection.FORWARD

    if config.start_mode is StartMode.PER_NODE:
        seeds = np.repeat(np.flatnonzero(store.region_sizes > 0), config.walks_per_node).astype(np.int64)
        states = WalkStates.allocate(seeds.size)
        walkset = WalkSet.allocate(seeds.size, config.walk_length, config.direction)
        states.current_node[:] = seeds
        states.current_time[:] = TIME_NEG_INF if forward else TIME_POS_INF
        walkset.nodes[:, 0] = store.node_ids[seeds]
        walkset.lengths[:] = 1
        kernel.run_direct(np.arange(seeds.size, dtype=np.int64), states, walkset)
        return states, walkset

    walk_count = int(config.total_walks or 0)
    states = WalkStates.allocate(walk_count)
    walkset = WalkSet.allocate(walk_count, config.walk_length, config.direction)
    if not walk_count:
        return states, walkset
    walk_ids = np.arange(walk_count, dtype=np.int64)
    edges = sample_start_edges(
        store,
        config.start_bias,
        kernel.rng.uniform(walk_ids, 0, ORDINAL_PICK),
        kernel.rng.uniform(walk_ids, 0, ORDINAL_WITHIN_GROUP),
        config.direction,
    )
    starts, nexts = (store.sources[edges], store.targets[edges])
    if not forward:
        starts, nexts = nexts, starts
    walkset.nodes[:, 0] = store.node_ids[starts]
    walkset.nodes[:, 1] = store.node_ids[nexts]
    walkset.times[:, 1] = store.times[edges]
    walkset.lengths[:] = 2
    states.prev_node[:] = starts
    states.current_node[:] = nexts
    states.current_time[:] = store.times[edges]
    states.hops_taken[:] = 1
    states.alive[:] = config.walk_length > 1
    return states, walkset


def schedule_step(
    states: WalkStates,
    store: EdgeStore,
    th: TierThresholds | None = None,
    *,
    cache_metadata: bool = True,
    timer: StageTimer | None = None,
) -> DispatchPlan:
    """
    Groups the alive walks by current node and places every group on the dispatch plane.

    Args:
        states: The walk states. Only alive walks are scheduled.
        store: The snapshot the walks run on; supplies each node's timestamp-group count G.
        th: The tier thresholds.
        cache_metadata: When false, cooperative tasks always take the direct tiers.
        timer: Receives the compact, regroup and dispatch stage timings.

    Returns:
        The dispatch plan. Its task lists are disjoint and together cover every alive walk exactly once.
    """
    th = th or TierThresholds()
    timer = timer or StageTimer()

    with timer.stage("compact", items=states.walk_count):
        alive = partition_flagged(states.alive)
    with timer.stage("regroup", items=alive.size):
        sorted_nodes, order = sort_pairs(states.current_node[alive], alive)
        run_nodes, run_lengths = run_length_encode(sorted_nodes)
        run_offsets = exclusive_scan(run_lengths)

    with timer.stage("dispatch", items=run_nodes.size):
        run_groups = store.node_group_counts[run_nodes]
        solo = run_lengths < th.w_warp
        block = run_lengths > th.block_dim
        warp = ~solo & ~block
        solo_runs = np.flatnonzero(solo)
        solo_walks = order[np.repeat(solo, run_lengths)]

        warp_cached = warp & (run_groups <= th.g_warp_cap) & cache_metadata
        block_cached = block & (run_groups <= th.g_block_cap) & cache_metadata
        tables = {
            tier: _runs_table(run_nodes, run_offsets, run_lengths, mask)
            for tier, mask in (
                (Tier.WARP_CACHED, warp_cached),
                (Tier.WARP_DIRECT, warp & ~warp_cached),
                (Tier.BLOCK_CACHED, block_cached),
                (Tier.BLOCK_DIRECT, block & ~block_cached),
            )
        }

        multi_block_tasks = 0
        for tier in (Tier.BLOCK_CACHED, Tier.BLOCK_DIRECT):
            tables[tier], split = _split_oversized(tables[tier], th.w_max)
            multi_block_tasks += split

    return DispatchPlan(
        order=order,
        run_nodes=run_nodes,
        run_lengths=run_lengths,
        run_groups=run_groups,
        solo_runs=solo_runs,
        solo_walks=solo_walks,
        tables=tables,
        multi_block_tasks=multi_block_tasks,
    )


def _runs_table(
    run_nodes: IndexArray,
    run_offsets: IndexArray,
    run_lengths: IndexArray,
    mask: npt.NDArray[np.bool_],
) -> TaskTable:
    return TaskTable(
        run_nodes[mask],
        run_offsets[mask],
        run_lengths[mask],
        np.zeros(int(np.count_nonzero(mask)), dtype=np.int64),
    )


def _split_oversized(table: TaskTable, w_max: int) -> tuple[TaskTable, int]:
    """
    Splits every task larger than `w_max` into contiguous sub-tasks of at most `w_max` walks.

    Returns:
        The expanded table and the number of sub-tasks that came from split tasks.
    """
    pieces = (table.sizes + w_max - 1) // w_max
    if not np.any(pieces > 1):
        return table, 0
    owner = np.repeat(np.arange(len(table)), pieces)
    piece_index = np.arange(owner.size) - np.repeat(exclusive_scan(pieces), pieces)
    sizes = np.minimum(w_max, table.sizes[owner] - piece_index * w_max)
    expanded = TaskTable(table.nodes[owner], table.starts[owner] + piece_index * w_max, sizes, piece_index)
    return expanded, int(pieces[pieces > 1].sum())


def execute_task(
    task: DispatchTask,
    store: EdgeStore,
    config: WalkConfig,
    states: WalkStates,
    walkset: WalkSet,
) -> None:
    """
    Advances every walk of the task by one hop. Cached tiers search a task-local copy of the node's group
    metadata, the other tiers search the shared index; both produce the same hops.
    """
    _HopKernel(store, config).run_task(task, states, walkset)


def _work_items(
    plan: DispatchPlan,
    kernel: _HopKernel,
    states: WalkStates,
    walkset: WalkSet,
) -> list[Callable[[], None]]:
    items: list[Callable[[], None]] = []
    for start in range(0, plan.solo_walks.size, SOLO_CHUNK_SIZE):
        chunk = plan.solo_walks[start : start + SOLO_CHUNK_SIZE]
        items.append(lambda chunk=chunk: kernel.run_direct(chunk, states, walkset))
    for tier in (Tier.WARP_CACHED, Tier.WARP_DIRECT, Tier.BLOCK_CACHED, Tier.BLOCK_DIRECT):
        for task in plan.tasks(tier):
            items.append(lambda task=task: kernel.run_task(task, states, walkset))
    return items


def _run_items(items: list[Callable[[], None]], pool: ThreadPoolExecutor | None) -> None:
    if pool is None:
        for item in items:
            item()
        return
    # Tasks own disjoint walk slots, so they can run in any order
    for future in [pool.submit(item) for item in items]:
        future.result()


def _resolve_workers(workers: int | None) -> int:
    workers = workers if workers is not None else int_env("TEMPOWALK_WORKERS", 1)
    if workers < 1:
        msg = f"workers must be at least 1, got {workers}"
        raise ConfigError(msg)
    return workers


def generate_walks(
    store: EdgeStore,
    config: WalkConfig,
    th: TierThresholds | None = None,
    *,
    workers: int | None = None,
    cache_metadata: bool = True,
    timer: StageTimer | None = None,
) -> WalkSet:
    """
    Generates walks under the cooperative scheduler.

    Args:
        store: The snapshot to walk on.
        config: The walk configuration.
        th: The tier thresholds.
        workers: The worker-pool size; 1 executes inline. Defaults to `TEMPOWALK_WORKERS`, else 1.
        cache_metadata: When false, runs the coop-direct variant where no task caches metadata.
        timer: Receives the stage timings.

    Returns:
        The walks, with `WalkStats` attached.
    """
    th = th or TierThresholds()
    workers = _resolve_workers(workers)
    timer = timer or StageTimer()
    started = time.perf_counter()

    with timer.stage("init"):
        states, walkset = init_walks(store, config)
    kernel = _HopKernel(store, config)
    tier_counts = {tier.value: 0 for tier in Tier}
    multi_block_tasks = 0
    steps = 0

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for step in range(1, config.walk_length):
            if not states.alive.any():
                break
            plan = schedule_step(states, store, th, cache_metadata=cache_metadata, timer=timer)
            counts = plan.task_counts()
            for tier, count in counts.items():
                tier_counts[tier.value] += count
            multi_block_tasks += plan.multi_block_tasks
            log_debug(
                "Scheduled step",
                step=step,
                alive=plan.alive_count,
                tasks={tier.value: count for tier, count in counts.items()},
                multi_block_tasks=plan.multi_block_tasks,
            )
            with timer.stage("execute", items=plan.alive_count):
                _run_items(_work_items(plan, kernel, states, walkset), pool)
            steps += 1
    finally:
        if pool is not None:
            pool.shutdown()

    walkset.stats = WalkStats(
        walks=walkset.walk_count,
        hops=walkset.hop_count,
        steps=steps,
        tier_task_counts=tier_counts,
        multi_block_tasks=multi_block_tasks,
        wall_time=time.perf_counter() - started,
        stages=timer.summaries(),
    )
    log_info("Generated walks", variant=Variant.COOP if cache_metadata else Variant.COOP_DIRECT, **_summary(walkset))
    return walkset


def generate_walks_fullwalk(
    store: EdgeStore,
    config: WalkConfig,
    *,
    workers: int | None = None,
    timer: StageTimer | None = None,
) -> WalkSet:
    """
    Full-walk baseline: walks are split into contiguous chunks and each chunk runs every hop to completion, with
    no regrouping by node. Produces the same walks as `generate_walks`.
    """
    workers = _resolve_workers(workers)
    timer = timer or StageTimer()
    started = time.perf_counter()

    with timer.stage("init"):
        states, walkset = init_walks(store, config)
    kernel = _HopKernel(store, config)
    rounds = np.zeros(max(1, -(-states.walk_count // FULLWALK_CHUNK_SIZE)), dtype=np.int64)

    def run_chunk(chunk_index: int) -> None:
        chunk = np.arange(
            chunk_index * FULLWALK_CHUNK_SIZE,
            min((chunk_index + 1) * FULLWALK_CHUNK_SIZE, states.walk_count),
            dtype=np.int64,
        )
        for _ in range(1, config.walk_length):
            lanes = chunk[states.alive[chunk]]
            if not lanes.size:
                break
            kernel.run_direct(lanes, states, walkset)
            rounds[chunk_index] += 1

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        with timer.stage("execute", items=states.walk_count):
            _run_items([lambda i=i: run_chunk(i) for i in range(rounds.size)], pool)
    finally:
        if pool is not None:
            pool.shutdown()

    walkset.stats = WalkStats(
        walks=walkset.walk_count,
        hops=walkset.hop_count,
        steps=int(rounds.max()),
        tier_task_counts={},
        multi_block_tasks=0,
        wall_time=time.perf_counter() - started,
        stages=timer.summaries(),
    )
    log_info("Generated walks", variant=Variant.FULLWALK, **_summary(walkset))
    return walkset


def run_variant(
    store: EdgeStore,
    config: WalkConfig,
    th: TierThresholds | None = None,
    variant: Variant | str = Variant.COOP,
    *,
    workers: int | None = None,
    timer: StageTimer | None = None,
) -> WalkSet:
    variant = Variant(variant)
    if variant is Variant.FULLWALK:
        return generate_walks_fullwalk(store, config, workers=workers, timer=timer)
    return generate_walks(
        store,
        config,
        th,
        workers=workers,
        cache_metadata=variant is Variant.COOP,
        timer=timer,
    )


def _summary(walkset: WalkSet) -> dict[str, Any]:
    stats = walkset.stats
    if stats is None:
        return {"walks": walkset.walk_count}
    return {
        "walks": stats.walks,
        "hops": stats.hops,
        "steps": stats.steps,
        "tier_task_counts": stats.tier_task_counts,
        "multi_block_tasks": stats.multi_block_tasks,
        "wall_time": round(stats.wall_time, 6),
    }

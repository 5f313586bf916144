"""
Benchmark suites: scaling, w_warp sweep, scheduler ablation, streaming memory and window-size sweep.

Every suite runs on synthetic graphs, so the results are reproducible without downloads. Each returns a
`BenchReport` with one row per measurement and a summary of the derived ratios.
"""

import time
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from typing import Any, NamedTuple, cast

import numpy as np

from tempowalk.edge_store import EdgeBatch, EdgeStore, build_index
from tempowalk.errors import UnknownSuiteError
from tempowalk.samplers import BiasKind
from tempowalk.synthetic import hub_skewed_graph, uniform_temporal_graph
from tempowalk.walk_engine import StartMode, Tier, TierThresholds, Variant, WalkConfig, WalkSet, run_variant
from tempowalk.walk_logging import log_info
from tempowalk.window_manager import BatchStats, WindowConfig, empty_window, ingest_batch

WWARP_SWEEP = (1, 2, 4, 8, 16, 32, 64)
WINDOW_SWEEP_BATCHES = tuple(range(1, 11))
# Batches before this index are warm-up and excluded from the memory ratios
MEMORY_WARMUP_BATCHES = 10


@dataclass(frozen=True)
class BenchSettings:
    sizes: tuple[int, ...] = (1_000, 10_000, 100_000, 1_000_000)
    batches: int = 100
    batch_edges: int = 100_000
    walks: int = 10_000
    walk_length: int = 80
    walks_per_node: int = 10
    hub_nodes: int = 20_000
    hub_edges: int = 200_000
    seed: int = 0
    workers: int | None = None
    thresholds: TierThresholds = field(default_factory=TierThresholds)


class BenchReport(NamedTuple):
    suite: str
    rows: list[dict[str, Any]]
    summary: dict[str, Any]

    def as_record(self) -> dict[str, Any]:
        return {"suite": self.suite, "rows": self.rows, "summary": self.summary}


def _sampled_config(settings: BenchSettings, *, seed: int | None = None) -> WalkConfig:
    return WalkConfig(
        walk_length=settings.walk_length,
        start_mode=StartMode.SAMPLED,
        total_walks=settings.walks,
        bias=BiasKind.EXPONENTIAL_INDEX,
        seed=settings.seed if seed is None else seed,
    )


def _per_node_config(settings: BenchSettings) -> WalkConfig:
    return WalkConfig(
        walk_length=settings.walk_length,
        walks_per_node=settings.walks_per_node,
        bias=BiasKind.EXPONENTIAL_INDEX,
        seed=settings.seed,
    )


def _timed_walks(
    store: EdgeStore,
    config: WalkConfig,
    settings: BenchSettings,
    variant: Variant = Variant.COOP,
    thresholds: TierThresholds | None = None,
) -> tuple[WalkSet, float]:
    started = time.perf_counter()
    walkset = run_variant(store, config, thresholds or settings.thresholds, variant, workers=settings.workers)
    return walkset, time.perf_counter() - started


def _hub_store(settings: BenchSettings) -> EdgeStore:
    edges = hub_skewed_graph(settings.hub_nodes, settings.hub_edges, settings.hub_edges * 5, seed=settings.seed)
    return build_index(edges)


def run_scaling(settings: BenchSettings) -> BenchReport:
    rows = []
    for size in settings.sizes:
        edges = uniform_temporal_graph(max(size // 10, 2), size, size, seed=settings.seed)
        started = time.perf_counter()
        store = build_index(edges)
        rebuild = time.perf_counter() - started
        walkset, elapsed = _timed_walks(store, _sampled_config(settings), settings)
        rows.append(
            {
                "edges": size,
                "rebuild_seconds": rebuild,
                "walk_seconds": elapsed,
                "walks": walkset.walk_count,
                "hops": walkset.hop_count,
                "per_walk_seconds": elapsed / max(walkset.walk_count, 1),
            },
        )
    summary: dict[str, Any] = {}
    by_size = {row["edges"]: row for row in rows}
    if 100_000 in by_size and 1_000_000 in by_size:
        summary["rebuild_ratio_1e6_over_1e5"] = (
            by_size[1_000_000]["rebuild_seconds"] / by_size[100_000]["rebuild_seconds"]
        )
    per_walk = [row["per_walk_seconds"] for row in rows if row["walks"]]
    if per_walk:
        summary["per_walk_max_over_min"] = max(per_walk) / min(per_walk)
    return BenchReport("scaling", rows, summary)


def run_wwarp_sweep(settings: BenchSettings) -> BenchReport:
    store = _hub_store(settings)
    config = _per_node_config(settings)
    rows = []
    for w_warp in WWARP_SWEEP:
        thresholds = replace(settings.thresholds, w_warp=w_warp)
        walkset, elapsed = _timed_walks(store, config, settings, thresholds=thresholds)
        rows.append(
            {
                "w_warp": w_warp,
                "seconds": elapsed,
                "hops": walkset.hop_count,
                "hops_per_second": walkset.hop_count / elapsed if elapsed else 0.0,
            },
        )
    best = max(rows, key=lambda row: row["hops_per_second"])
    return BenchReport("wwarp-sweep", rows, {"best_w_warp": best["w_warp"]})


def tier_percentages(walkset: WalkSet) -> dict[str, float]:
    counts = walkset.stats.tier_task_counts if walkset.stats else {}
    total = sum(counts.values())
    return {tier.value: (100.0 * counts.get(tier.value, 0) / total if total else 0.0) for tier in Tier}


def run_ablation(settings: BenchSettings) -> BenchReport:
    store = _hub_store(settings)
    config = _per_node_config(settings)
    rows = []
    for variant in (Variant.FULLWALK, Variant.COOP_DIRECT, Variant.COOP):
        walkset, elapsed = _timed_walks(store, config, settings, variant)
        stats = walkset.stats
        rows.append(
            {
                "variant": variant.value,
                "seconds": elapsed,
                "steps": stats.steps if stats else 0,
                "hops": walkset.hop_count,
                "steps_per_second": (stats.steps / elapsed if stats and elapsed else 0.0),
                "hops_per_second": walkset.hop_count / elapsed if elapsed else 0.0,
                "tier_task_counts": dict(stats.tier_task_counts) if stats else {},
                "tier_percentages": tier_percentages(walkset),
                "multi_block_tasks": stats.multi_block_tasks if stats else 0,
            },
        )
    coop = rows[-1]
    covered = [tier for tier, count in coop["tier_task_counts"].items() if count > 0]
    if coop["multi_block_tasks"]:
        covered.append("multi-block")
    return BenchReport(
        "ablation",
        rows,
        {
            "tiers_exercised": covered,
            "all_tiers_exercised": len(covered) == len(Tier) + 1,
            "speedup_over_fullwalk": rows[0]["seconds"] / coop["seconds"] if coop["seconds"] else 0.0,
        },
    )


def _stream_batch(settings: BenchSettings, index: int) -> EdgeBatch:
    duration = settings.batch_edges
    batch = uniform_temporal_graph(
        max(settings.batch_edges // 10, 2),
        settings.batch_edges,
        duration,
        seed=settings.seed + index,
    )
    return EdgeBatch(batch.sources, batch.targets, batch.times + index * duration)


def run_memory(settings: BenchSettings) -> BenchReport:
    window = WindowConfig(duration=10 * settings.batch_edges)
    state = empty_window(window)
    rows = []
    for index in range(settings.batches):
        started = time.perf_counter()
        state = ingest_batch(state, _stream_batch(settings, index))
        elapsed = time.perf_counter() - started
        stats = cast(BatchStats, state.last_batch_stats)
        rows.append(
            {
                "batch": index,
                "ingest_seconds": elapsed,
                "retained": stats.retained,
                "peak_bytes": stats.peak_bytes,
                "resident_bytes": stats.resident_bytes,
            },
        )
    summary: dict[str, Any] = {}
    steady = rows[MEMORY_WARMUP_BATCHES:]
    if len(steady) >= 2:  # noqa: PLR2004
        peaks = np.array([row["peak_bytes"] for row in steady], dtype=np.float64)
        ingest = np.array([row["ingest_seconds"] for row in steady], dtype=np.float64)
        slope = np.polyfit(np.arange(ingest.size, dtype=np.float64), ingest, 1)[0]
        summary["peak_bytes_max_over_min"] = float(peaks.max() / peaks.min())
        summary["ingest_slope_over_mean"] = float(slope / ingest.mean())
        summary["mean_ingest_seconds"] = float(ingest.mean())
    return BenchReport("memory", rows, summary)


def run_window_sweep(settings: BenchSettings) -> BenchReport:
    rows = []
    batches = min(settings.batches, 2 * max(WINDOW_SWEEP_BATCHES))
    for window_batches in WINDOW_SWEEP_BATCHES:
        state = empty_window(WindowConfig(duration=window_batches * settings.batch_edges))
        latencies = []
        for index in range(batches):
            state = ingest_batch(state, _stream_batch(settings, index))
            _, elapsed = _timed_walks(state.store, _sampled_config(settings, seed=settings.seed + index), settings)
            latencies.append(elapsed)
        rows.append(
            {
                "window_batches": window_batches,
                "retained": state.store.edge_count,
                "mean_sampling_seconds": float(np.mean(latencies)) if latencies else 0.0,
            },
        )
    return BenchReport("window-sweep", rows, {})


SUITES: dict[str, Callable[[BenchSettings], BenchReport]] = {
    "scaling": run_scaling,
    "wwarp-sweep": run_wwarp_sweep,
    "ablation": run_ablation,
    "memory": run_memory,
    "window-sweep": run_window_sweep,
}


def run_suite(name: str, settings: BenchSettings | None = None) -> BenchReport:
    """
    Runs one named suite.

    Raises:
        UnknownSuiteError: If no suite has that name.
    """
    suite = SUITES.get(name)
    if suite is None:
        msg = f"unknown bench suite {name!r}, expected one of {', '.join(SUITES)}"
        raise UnknownSuiteError(msg)
    report = suite(settings or BenchSettings())
    for row in report.rows:
        log_info("Bench row", suite=name, **row)
    log_info("Bench summary", suite=name, **report.summary)
    return report

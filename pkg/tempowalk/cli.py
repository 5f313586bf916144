"""
The `tempowalk` command line: `walk`, `replay`, `validate`, `bench` and `generate`.
"""

import argparse
import contextlib
import json
import sys
import time
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import replace
from pathlib import Path
from typing import IO, Any

import numpy as np

from tempowalk import __version__
from tempowalk.bench import SUITES, BenchReport, BenchSettings, run_suite
from tempowalk.command_guard import guarded_command
from tempowalk.config import RunConfig
from tempowalk.edge_io import (
    FileFormat,
    iter_edge_chunks,
    read_edges,
    read_walks,
    write_edges,
    write_stats_record,
    write_walks_binary,
    write_walks_text,
)
from tempowalk.edge_store import EdgeBatch, WalkDirection
from tempowalk.errors import TempoWalkError
from tempowalk.samplers import AdjacencyScope, BiasKind, Node2VecParams
from tempowalk.stage_timer import StageTimer
from tempowalk.synthetic import chain_graph, hub_skewed_graph, mega_hub_graph, uniform_temporal_graph
from tempowalk.validity_checker import EdgeOracle, ValidityReport, check_walks
from tempowalk.walk_engine import StartMode, TierThresholds, Variant, WalkConfig, WalkSet, run_variant
from tempowalk.walk_logging import log_info, log_warning, walk_context
from tempowalk.window_manager import empty_window, ingest_batch

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_REJECTED = 2

BIAS_CHOICES = {
    "uniform": BiasKind.UNIFORM_INDEX,
    "linear": BiasKind.LINEAR_INDEX,
    "exp-index": BiasKind.EXPONENTIAL_INDEX,
    "exp-weight": BiasKind.EXPONENTIAL_WEIGHT,
}
NODE2VEC_BIAS = "node2vec"
GENERATORS = ("uniform", "hub-skewed", "mega-hub", "chain")


def split_batches(chunks: Iterable[EdgeBatch], batch_duration: int | None) -> Iterator[EdgeBatch]:
    """
    Cuts an edge stream, in file order, into batches of `batch_duration` time units counted from the first
    timestamp. A batch closes when an edge belongs to a later batch than every edge before it; edges that belong
    to an earlier batch stay in the open one. Periods without edges produce no batch.
    """
    origin: int | None = None
    current: int | None = None
    pending: list[EdgeBatch] = []
    for chunk in chunks:
        if not len(chunk):
            continue
        if origin is None:
            origin = int(chunk.times[0])
        if batch_duration is None:
            pending.append(chunk)
            continue
        index = (chunk.times - origin) // batch_duration
        floor = int(index[0]) if current is None else current
        running = np.maximum.accumulate(np.maximum(index, floor))
        cuts = (np.flatnonzero(running[1:] != running[:-1]) + 1).tolist()
        for start, end in zip([0, *cuts], [*cuts, len(chunk)], strict=True):
            segment = int(running[start])
            if current is not None and segment != current and pending:
                yield EdgeBatch.concatenate(pending)
                pending = []
            current = segment
            pending.append(chunk.take(slice(start, end)))
    if pending:
        yield EdgeBatch.concatenate(pending)


@contextlib.contextmanager
def _open_output(path: Path | None, *, binary: bool = False, append: bool = False) -> Iterator[IO[Any]]:
    if path is None:
        yield sys.stdout.buffer if binary else sys.stdout
        return
    mode = ("a" if append else "w") + ("b" if binary else "")
    with path.open(mode, **({} if binary else {"encoding": "utf-8"})) as handle:
        yield handle


def _write_walks(handle: IO[Any], walkset: WalkSet, file_format: FileFormat) -> None:
    if file_format is FileFormat.BINARY:
        write_walks_binary(handle, walkset)
    else:
        write_walks_text(handle, walkset)


@guarded_command
def cmd_walk(config: RunConfig, *, timer: StageTimer | None = None) -> WalkSet:
    """
    Bulk mode: ingests the whole input as one window, generates walks and writes them out.
    """
    timer = timer or StageTimer()
    with timer.stage("read"):
        edges = read_edges(config.input_path)
    state = ingest_batch(empty_window(config.window_config()), edges, timer=timer)
    with walk_context(variant=config.variant.value):
        walkset = run_variant(
            state.store,
            config.walk,
            config.thresholds,
            config.variant,
            workers=config.workers,
            timer=timer,
        )
    with _open_output(config.output_path, binary=config.output_format is FileFormat.BINARY) as handle:
        _write_walks(handle, walkset, config.output_format)
    if config.stats_path is not None:
        record: dict[str, Any] = {}
        if state.last_batch_stats is not None:
            record.update(state.last_batch_stats.as_record())
        if walkset.stats is not None:
            record.update(walkset.stats.as_record())
        with config.stats_path.open("w", encoding="utf-8") as handle:
            write_stats_record(handle, record)
    return walkset


def _time_span(path: Path) -> int:
    low, high = None, None
    for chunk in iter_edge_chunks(path):
        if len(chunk):
            low = int(chunk.times.min()) if low is None else min(low, int(chunk.times.min()))
            high = int(chunk.times.max()) if high is None else max(high, int(chunk.times.max()))
    return 0 if low is None or high is None else high - low


@guarded_command
def cmd_replay(config: RunConfig, *, timer: StageTimer | None = None) -> list[dict[str, Any]]:
    """
    Streaming mode: cuts the input into batches, ingests each into the sliding window and generates walks after
    every batch. Batch k's walks use seed `seed + k`.

    Returns:
        One stats record per batch, as written to the stats stream.
    """
    timer = timer or StageTimer()
    if config.window_duration is None and config.batch_duration is not None:
        config = config.with_time_span(_time_span(config.input_path))
    state = empty_window(config.window_config())
    records: list[dict[str, Any]] = []
    binary = config.output_format is FileFormat.BINARY

    with contextlib.ExitStack() as stack:
        stack.enter_context(walk_context(variant=config.variant.value))
        walk_handle = stack.enter_context(_open_output(config.output_path, binary=binary))
        stats_handle = (
            stack.enter_context(config.stats_path.open("w", encoding="utf-8")) if config.stats_path else None
        )
        for batch_index, batch in enumerate(split_batches(iter_edge_chunks(config.input_path), config.batch_duration)):
            with walk_context(batch_index=batch_index):
                started = time.perf_counter()
                batch_timer = StageTimer()
                state = ingest_batch(state, batch, timer=batch_timer)
                walk_config = replace(config.walk, seed=config.walk.seed + batch_index)
                walkset = run_variant(
                    state.store,
                    walk_config,
                    config.thresholds,
                    config.variant,
                    workers=config.workers,
                    timer=batch_timer,
                )
                elapsed = time.perf_counter() - started
                _write_walks(walk_handle, walkset, config.output_format)
                for timing in batch_timer.timings:
                    timer.record(timing.stage, timing.duration, timing.items)

                record: dict[str, Any] = {}
                if state.last_batch_stats is not None:
                    record.update(state.last_batch_stats.as_record())
                if walkset.stats is not None:
                    record.update(walkset.stats.as_record())
                record["batch_seconds"] = elapsed
                if config.arrival_interval is not None:
                    record["backlog"] = elapsed > config.arrival_interval
                    if record["backlog"]:
                        log_warning(
                            "Batch processing fell behind arrivals",
                            batch_seconds=elapsed,
                            arrival_interval=config.arrival_interval,
                        )
                records.append(record)
                if stats_handle is not None:
                    write_stats_record(stats_handle, record)

    log_info("Replay finished", batches=len(records), retained=state.store.edge_count)
    return records


@guarded_command
def cmd_validate(
    walks_path: Path,
    edges_path: Path,
    *,
    undirected: bool = False,
    direction: WalkDirection = WalkDirection.FORWARD,
    strict: bool = True,
    timed: bool | None = None,
    output_path: Path | None = None,
) -> ValidityReport:
    """
    Audits a walk file against an edge file. Walks are checked hop by hop when they carry times, otherwise with
    the greedy earliest-feasible assignment; `timed` forces either mode.
    """
    walks = read_walks(walks_path)
    oracle = EdgeOracle.from_batch(read_edges(edges_path), undirected=undirected)
    if timed is None:
        timed = any(time_ is not None for walk in walks for _, time_ in walk[1:])
    report = check_walks(walks, oracle, direction=direction, strict=strict, timed=timed)
    with _open_output(output_path) as handle:
        handle.write(json.dumps({**report.as_record(), "timed": timed}, sort_keys=True))
        handle.write("\n")
    log_info(
        "Validated walks",
        walks=report.total_walks,
        valid_walk_percent=report.valid_walk_percent,
        valid_hop_percent=report.valid_hop_percent,
    )
    return report


@guarded_command
def cmd_bench(suite: str, settings: BenchSettings, *, output_path: Path | None = None) -> BenchReport:
    report = run_suite(suite, settings)
    with _open_output(output_path) as handle:
        handle.write(json.dumps(report.as_record(), sort_keys=True, indent=2))
        handle.write("\n")
    return report


@guarded_command
def cmd_generate(
    kind: str,
    output_path: Path,
    *,
    nodes: int = 1_000,
    edges: int = 10_000,
    time_span: int = 10_000,
    seed: int = 0,
    file_format: FileFormat = FileFormat.TEXT,
) -> EdgeBatch:
    if kind == "uniform":
        batch = uniform_temporal_graph(nodes, edges, time_span, seed=seed)
    elif kind == "hub-skewed":
        batch = hub_skewed_graph(nodes, edges, time_span, seed=seed)
    elif kind == "mega-hub":
        batch = mega_hub_graph(nodes)
    else:
        batch = chain_graph(nodes)
    write_edges(output_path, batch, file_format)
    log_info("Generated edges", kind=kind, edges=len(batch), path=str(output_path))
    return batch


def _add_walk_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", type=Path, help="edge file (text or binary)")
    parser.add_argument("--window", type=int, default=None, help="window duration, in edge-time units")
    parser.add_argument("--batch-duration", type=int, default=None, help="batch duration, in edge-time units")
    parser.add_argument("--walk-length", type=int, default=80, help="maximum hops per walk")
    parser.add_argument("--walks-per-node", type=int, default=10)
    parser.add_argument("--num-walks", type=int, default=None, help="number of sampled walks; implies sampled starts")
    parser.add_argument("--start-mode", choices=[mode.value for mode in StartMode], default=None)
    parser.add_argument("--bias", choices=[*BIAS_CHOICES, NODE2VEC_BIAS], default="exp-index")
    parser.add_argument("--start-bias", choices=list(BIAS_CHOICES), default="uniform")
    parser.add_argument("--weight-scale", type=float, default=1.0)
    parser.add_argument("--p", type=float, default=1.0, help="Node2Vec return parameter")
    parser.add_argument("--q", type=float, default=1.0, help="Node2Vec in-out parameter")
    parser.add_argument("--adjacency-scope", choices=[scope.value for scope in AdjacencyScope], default="window")
    parser.add_argument("--direction", choices=[d.value for d in WalkDirection], default="forward")
    parser.add_argument("--undirected", action="store_true")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--variant", choices=[variant.value for variant in Variant], default="coop")
    parser.add_argument("--workers", type=int, default=None)
    _add_threshold_arguments(parser)
    parser.add_argument("--output", type=Path, default=None, help="walk output path (default: stdout)")
    parser.add_argument("--format", choices=[f.value for f in FileFormat], default="text", dest="output_format")
    parser.add_argument("--stats", type=Path, default=None, help="newline-delimited stats output path")


def _add_threshold_arguments(parser: argparse.ArgumentParser) -> None:
    defaults = TierThresholds()
    parser.add_argument("--w-warp", type=int, default=defaults.w_warp)
    parser.add_argument("--block-dim", type=int, default=defaults.block_dim)
    parser.add_argument("--w-max", type=int, default=defaults.w_max)
    parser.add_argument("--g-warp-cap", type=int, default=defaults.g_warp_cap)
    parser.add_argument("--g-block-cap", type=int, default=defaults.g_block_cap)


def _thresholds(args: argparse.Namespace) -> TierThresholds:
    return TierThresholds(
        w_warp=args.w_warp,
        block_dim=args.block_dim,
        w_max=args.w_max,
        g_warp_cap=args.g_warp_cap,
        g_block_cap=args.g_block_cap,
    )


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    start_mode = args.start_mode or (StartMode.SAMPLED if args.num_walks is not None else StartMode.PER_NODE)
    node2vec = None
    if args.bias == NODE2VEC_BIAS:
        node2vec = Node2VecParams(args.p, args.q)
    walk = WalkConfig(
        walk_length=args.walk_length,
        start_mode=start_mode,
        walks_per_node=args.walks_per_node,
        total_walks=args.num_walks,
        bias=BIAS_CHOICES.get(args.bias, BiasKind.EXPONENTIAL_WEIGHT),
        start_bias=BIAS_CHOICES[args.start_bias],
        node2vec=node2vec,
        adjacency_scope=args.adjacency_scope,
        direction=args.direction,
        seed=args.seed,
    )
    return RunConfig(
        input_path=args.input,
        batch_duration=args.batch_duration,
        window_duration=args.window,
        undirected=args.undirected,
        weight_scale=args.weight_scale,
        walk=walk,
        thresholds=_thresholds(args),
        variant=args.variant,
        workers=args.workers,
        output_path=args.output,
        output_format=args.output_format,
        stats_path=args.stats,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempowalk", description="Temporal random walks over edge streams")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    walk = commands.add_parser("walk", help="generate walks over the whole input (bulk mode)")
    _add_walk_arguments(walk)

    replay = commands.add_parser("replay", help="replay the input as a stream of batches")
    _add_walk_arguments(replay)
    replay.add_argument("--arrival-interval", type=float, default=None, help="seconds between batch arrivals")

    validate = commands.add_parser("validate", help="check walks for temporal causality")
    validate.add_argument("walks", type=Path)
    validate.add_argument("edges", type=Path)
    validate.add_argument("--undirected", action="store_true")
    validate.add_argument("--direction", choices=[d.value for d in WalkDirection], default="forward")
    validate.add_argument("--non-strict", action="store_true", help="accept equal consecutive timestamps")
    timing = validate.add_mutually_exclusive_group()
    timing.add_argument("--timed", dest="timed", action="store_true", default=None)
    timing.add_argument("--untimed", dest="timed", action="store_false")
    validate.add_argument("--output", type=Path, default=None)

    bench = commands.add_parser("bench", help="run a benchmark suite")
    bench.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    bench.add_argument("--sizes", type=lambda raw: tuple(int(v) for v in raw.split(",")), default=None)
    bench.add_argument("--batches", type=int, default=None)
    bench.add_argument("--batch-edges", type=int, default=None)
    bench.add_argument("--walks", type=int, default=None)
    bench.add_argument("--walk-length", type=int, default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--workers", type=int, default=None)
    _add_threshold_arguments(bench)
    bench.add_argument("--output", type=Path, default=None)

    generate = commands.add_parser("generate", help="write a synthetic edge file")
    generate.add_argument("kind", choices=GENERATORS)
    generate.add_argument("output", type=Path)
    generate.add_argument("--nodes", type=int, default=1_000)
    generate.add_argument("--edges", type=int, default=10_000)
    generate.add_argument("--time-span", type=int, default=10_000)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--format", choices=[f.value for f in FileFormat], default="text", dest="output_format")
    return parser


def _bench_settings(args: argparse.Namespace) -> BenchSettings:
    overrides = {
        name: value
        for name, value in (
            ("sizes", args.sizes),
            ("batches", args.batches),
            ("batch_edges", args.batch_edges),
            ("walks", args.walks),
            ("walk_length", args.walk_length),
        )
        if value is not None
    }
    return replace(BenchSettings(), seed=args.seed, workers=args.workers, thresholds=_thresholds(args), **overrides)


def dispatch(args: argparse.Namespace) -> None:
    if args.command == "walk":
        cmd_walk(run_config_from_args(args), timer=StageTimer())
    elif args.command == "replay":
        cmd_replay(replace(run_config_from_args(args), arrival_interval=args.arrival_interval), timer=StageTimer())
    elif args.command == "validate":
        cmd_validate(
            args.walks,
            args.edges,
            undirected=args.undirected,
            direction=WalkDirection(args.direction),
            strict=not args.non_strict,
            timed=args.timed,
            output_path=args.output,
        )
    elif args.command == "bench":
        cmd_bench(args.suite, _bench_settings(args), output_path=args.output)
    else:
        cmd_generate(
            args.kind,
            args.output,
            nodes=args.nodes,
            edges=args.edges,
            time_span=args.time_span,
            seed=args.seed,
            file_format=FileFormat(args.output_format),
        )


def main(argv: Sequence[str] | None = None) -> int:
    """
    Entry point of the `tempowalk` script. Returns 0 on success, 2 when the input or configuration is rejected,
    1 on any other failure.
    """
    args = build_parser().parse_args(argv)
    try:
        dispatch(args)
    except TempoWalkError as e:
        print(f"tempowalk: error: {e}", file=sys.stderr)  # noqa: T201
        return EXIT_REJECTED
    except Exception as e:  # noqa: BLE001
        print(f"tempowalk: unexpected failure: {type(e).__name__}: {e}", file=sys.stderr)  # noqa: T201
        return EXIT_FAILURE
    return EXIT_OK

import json
from unittest.mock import patch

import pytest
import structlog

from tempowalk.cli import build_parser, main, run_config_from_args, split_batches
from tempowalk.edge_io import read_stats, read_walks, write_edges
from tempowalk.edge_store import EdgeBatch
from tempowalk.samplers import BiasKind
from tempowalk.synthetic import chain_graph, uniform_temporal_graph
from tempowalk.walk_engine import StartMode, Variant


@pytest.fixture(autouse=True)
def no_notifications():
    with patch("tempowalk.command_guard.slack_notify"), patch("tempowalk.command_guard.sentry_capture", return_value=False):
        yield


@pytest.fixture
def edge_file(tmp_path):
    path = tmp_path / "edges.tsv"
    write_edges(path, uniform_temporal_graph(80, 3000, 1000, seed=3))
    return path


def _batch(times):
    return EdgeBatch.from_arrays([0] * len(times), [1] * len(times), times)


def test_split_batches_keeps_late_edges_in_the_open_batch():
    chunks = [_batch([10, 12, 25, 11, 31]), _batch([33, 60, 29])]
    batches = [batch.times.tolist() for batch in split_batches(chunks, 10)]
    assert batches == [[10, 12], [25, 11], [31, 33], [60, 29]]


def test_split_batches_without_duration_yields_one_batch():
    batches = list(split_batches([_batch([5, 1]), _batch([]), _batch([9])], None))
    assert [batch.times.tolist() for batch in batches] == [[5, 1, 9]]
    assert list(split_batches([], 10)) == []


def test_parser_maps_flags_to_run_config(tmp_path):
    args = build_parser().parse_args(
        [
            "walk",
            str(tmp_path / "in.tsv"),
            "--bias",
            "node2vec",
            "--p",
            "0.5",
            "--q",
            "2",
            "--num-walks",
            "7",
            "--variant",
            "fullwalk",
            "--w-warp",
            "8",
            "--undirected",
        ],
    )
    config = run_config_from_args(args)
    assert config.walk.bias is BiasKind.EXPONENTIAL_WEIGHT
    assert config.walk.node2vec.p == 0.5
    assert config.walk.node2vec.q == 2.0
    assert config.walk.start_mode is StartMode.SAMPLED
    assert config.walk.total_walks == 7
    assert config.variant is Variant.FULLWALK
    assert config.thresholds.w_warp == 8
    assert config.undirected


def test_walk_writes_the_causal_chain(tmp_path):
    edges, output = tmp_path / "chain.tsv", tmp_path / "walks.txt"
    write_edges(edges, chain_graph(2))
    assert main(["walk", str(edges), "--walk-length", "3", "--walks-per-node", "1", "--output", str(output)]) == 0
    assert output.read_text().splitlines()[0] == "0@- 1@1 2@2"


def test_walk_writes_stats(tmp_path):
    edges, output, stats = tmp_path / "chain.tsv", tmp_path / "walks.txt", tmp_path / "stats.jsonl"
    write_edges(edges, chain_graph(4))
    args = ["walk", str(edges), "--walk-length", "3", "--walks-per-node", "2", "--output", str(output)]
    assert main([*args, "--stats", str(stats)]) == 0
    (record,) = read_stats(stats)
    assert record["retained"] == 4
    assert record["walks"] == 8


def test_sampled_single_hop_walks(tmp_path, edge_file):
    output = tmp_path / "walks.txt"
    assert main(["walk", str(edge_file), "--walk-length", "1", "--num-walks", "5", "--output", str(output)]) == 0
    walks = read_walks(output)
    assert len(walks) == 5
    assert all(len(walk) == 2 for walk in walks)


def test_variants_write_identical_files(tmp_path, edge_file):
    outputs = []
    for variant in ("coop", "coop-direct", "fullwalk"):
        output = tmp_path / f"{variant}.txt"
        args = ["walk", str(edge_file), "--walk-length", "12", "--seed", "4", "--variant", variant, "--w-warp", "2"]
        assert main([*args, "--output", str(output)]) == 0
        outputs.append(output.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_single_batch_replay_equals_bulk_walk(tmp_path, edge_file):
    bulk, replayed, stats = tmp_path / "bulk.txt", tmp_path / "replay.txt", tmp_path / "stats.ndjson"
    common = ["--walk-length", "10", "--walks-per-node", "2", "--bias", "exp-weight", "--seed", "9"]
    assert main(["walk", str(edge_file), *common, "--output", str(bulk)]) == 0
    assert (
        main(
            [
                "replay",
                str(edge_file),
                *common,
                "--batch-duration",
                "5000",
                "--output",
                str(replayed),
                "--stats",
                str(stats),
            ],
        )
        == 0
    )
    assert bulk.read_bytes() == replayed.read_bytes()
    records = read_stats(stats)
    assert len(records) == 1
    assert records[0]["dropped_late"] == 0
    assert records[0]["retained"] == 3000


def test_replay_emits_one_stats_record_per_batch(tmp_path, edge_file):
    stats, output = tmp_path / "stats.ndjson", tmp_path / "walks.txt"
    args = ["replay", str(edge_file), "--batch-duration", "100", "--window", "300", "--walk-length", "5"]
    assert main([*args, "--num-walks", "10", "--stats", str(stats), "--output", str(output)]) == 0
    records = read_stats(stats)
    assert [record["batch_index"] for record in records] == list(range(len(records)))
    assert 9 <= len(records) <= 10
    assert all(record["t_high"] - record["t_low"] <= 300 for record in records)
    assert all("tier_task_counts" in record for record in records)
    assert len(read_walks(output)) == 10 * len(records)


def test_replay_flags_backlog(tmp_path, edge_file):
    stats = tmp_path / "stats.ndjson"
    args = ["replay", str(edge_file), "--batch-duration", "500", "--walk-length", "3", "--num-walks", "2"]
    with patch("tempowalk.cli.log_warning") as mock_log_warning:
        assert main([*args, "--arrival-interval", "1e-9", "--stats", str(stats), "--output", str(tmp_path / "w")]) == 0
    assert all(record["backlog"] for record in read_stats(stats))
    assert mock_log_warning.call_count == len(read_stats(stats))


def test_replay_logs_carry_batch_and_variant(tmp_path, edge_file):
    bound = []

    def remember_context(*_, **__):
        bound.append(structlog.contextvars.get_contextvars())

    args = ["replay", str(edge_file), "--batch-duration", "500", "--walk-length", "3", "--num-walks", "2"]
    args += ["--variant", "coop-direct", "--arrival-interval", "1e-9", "--output", str(tmp_path / "w")]
    with patch("tempowalk.cli.log_warning", side_effect=remember_context):
        assert main(args) == 0
    assert bound
    assert [fields["batch_index"] for fields in bound] == list(range(len(bound)))
    assert {fields["variant"] for fields in bound} == {"coop-direct"}
    assert structlog.contextvars.get_contextvars() == {}


def test_replay_of_an_empty_file(tmp_path):
    edges, stats = tmp_path / "empty.tsv", tmp_path / "stats.ndjson"
    edges.write_text("")
    assert main(["replay", str(edges), "--batch-duration", "10", "--stats", str(stats), "--output", str(tmp_path / "w")]) == 0
    assert read_stats(stats) == []


def test_validate_reports_walk_validity(tmp_path, edge_file, capsys):
    walks = tmp_path / "walks.txt"
    assert main(["walk", str(edge_file), "--walk-length", "8", "--output", str(walks)]) == 0
    capsys.readouterr()
    assert main(["validate", str(walks), str(edge_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["valid_walk_percent"] == 100.0
    assert report["valid_hop_percent"] == 100.0
    assert report["timed"] is True


def test_validate_untimed_walks(tmp_path, capsys):
    edges, walks, output = tmp_path / "edges.tsv", tmp_path / "walks.txt", tmp_path / "report.json"
    write_edges(edges, EdgeBatch.from_edges([(1, 2, 5), (2, 3, 3)]))
    walks.write_text("1 2 3\n1 2\n")
    assert main(["validate", str(walks), str(edges), "--output", str(output)]) == 0
    report = json.loads(output.read_text())
    assert report["timed"] is False
    assert report["valid_walks"] == 1
    assert report["invalid_walks"] == [0]


def test_generate_writes_edge_files(tmp_path):
    output = tmp_path / "hub.bin"
    assert main(["generate", "mega-hub", str(output), "--nodes", "50", "--format", "binary"]) == 0
    assert output.read_bytes().startswith(b"TMPW0001")


def test_bench_writes_a_report(tmp_path):
    output = tmp_path / "bench.json"
    args = ["bench", "scaling", "--sizes", "100,400", "--walks", "20", "--walk-length", "5", "--output", str(output)]
    assert main(args) == 0
    report = json.loads(output.read_text())
    assert report["suite"] == "scaling"
    assert [row["edges"] for row in report["rows"]] == [100, 400]


@pytest.mark.parametrize(
    "args",
    [
        ["bench", "no-such-suite"],
        ["walk", "{edges}", "--batch-duration", "10", "--window", "5"],
        ["walk", "{edges}", "--bias", "node2vec", "--p", "0"],
        ["walk", "{edges}", "--direction", "backward", "--w-warp", "0"],
    ],
)
def test_rejected_configuration_exits_with_code_2(tmp_path, edge_file, capsys, args):
    assert main([arg.format(edges=edge_file) for arg in args]) == 2
    assert capsys.readouterr().err.startswith("tempowalk: error:")


def test_unparseable_edges_exit_with_code_2(tmp_path, capsys):
    edges = tmp_path / "bad.tsv"
    edges.write_text("1\t2\t3\n1\t2\toops\n")
    assert main(["walk", str(edges), "--output", str(tmp_path / "w")]) == 2
    assert ":2:" in capsys.readouterr().err


@pytest.mark.parametrize("content", [b"1\t2\t3\n\xff\t2\t4\n", b"1\t2\t3\n18446744073709551615\t2\t4\n"])
def test_undecodable_or_oversized_edges_exit_with_code_2(tmp_path, capsys, content):
    edges = tmp_path / "bad.tsv"
    edges.write_bytes(content)
    assert main(["walk", str(edges), "--output", str(tmp_path / "w")]) == 2
    assert ":2:" in capsys.readouterr().err


def test_unexpected_failures_exit_with_code_1(tmp_path, edge_file):
    with patch("tempowalk.cli.run_variant", side_effect=RuntimeError("boom")):
        assert main(["walk", str(edge_file), "--output", str(tmp_path / "w")]) == 1


def test_binary_walk_output(tmp_path, edge_file):
    output = tmp_path / "walks.bin"
    assert main(["walk", str(edge_file), "--walk-length", "4", "--format", "binary", "--output", str(output)]) == 0
    assert output.read_bytes().startswith(b"TMPWALK1")
    assert all(len(walk) >= 2 for walk in read_walks(output))

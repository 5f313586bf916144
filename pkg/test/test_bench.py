import pytest

from tempowalk.bench import SUITES, WINDOW_SWEEP_BATCHES, WWARP_SWEEP, BenchSettings, run_suite, tier_percentages
from tempowalk.edge_store import build_index
from tempowalk.errors import UnknownSuiteError
from tempowalk.synthetic import hub_skewed_graph
from tempowalk.walk_engine import Tier, TierThresholds, WalkConfig, generate_walks

SMALL = BenchSettings(
    sizes=(200, 2_000),
    batches=12,
    batch_edges=50,
    walks=30,
    walk_length=5,
    walks_per_node=2,
    hub_nodes=150,
    hub_edges=1_500,
    thresholds=TierThresholds(w_warp=2, block_dim=8, w_max=16, g_warp_cap=4, g_block_cap=16),
)


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError, match="scaling"):
        run_suite("nope", SMALL)


def test_scaling():
    report = run_suite("scaling", SMALL)
    assert [row["edges"] for row in report.rows] == [200, 2_000]
    assert all(row["walks"] == 30 for row in report.rows)
    assert report.summary["per_walk_max_over_min"] >= 1.0


def test_wwarp_sweep():
    report = run_suite("wwarp-sweep", SMALL)
    assert [row["w_warp"] for row in report.rows] == list(WWARP_SWEEP)
    # Tier placement never changes which walks are produced
    assert len({row["hops"] for row in report.rows}) == 1
    assert report.summary["best_w_warp"] in WWARP_SWEEP


def test_ablation():
    report = run_suite("ablation", SMALL)
    assert [row["variant"] for row in report.rows] == ["fullwalk", "coop-direct", "coop"]
    assert len({row["hops"] for row in report.rows}) == 1
    coop = report.rows[-1]
    assert sum(coop["tier_percentages"].values()) == pytest.approx(100.0)
    assert set(report.summary) == {"tiers_exercised", "all_tiers_exercised", "speedup_over_fullwalk"}
    assert report.summary["all_tiers_exercised"] is (len(report.summary["tiers_exercised"]) == len(Tier) + 1)


@pytest.mark.slow
def test_ablation_on_the_default_hub_graph_exercises_every_tier():
    report = run_suite("ablation", BenchSettings())
    coop = report.rows[-1]
    assert report.summary["all_tiers_exercised"]
    assert all(coop["tier_task_counts"].get(tier.value, 0) > 0 for tier in Tier)
    assert coop["multi_block_tasks"] > 0


def test_memory():
    report = run_suite("memory", SMALL)
    assert len(report.rows) == 12
    assert all(row["peak_bytes"] > 0 for row in report.rows)
    assert {"peak_bytes_max_over_min", "ingest_slope_over_mean", "mean_ingest_seconds"} <= set(report.summary)


def test_memory_without_steady_batches():
    report = run_suite("memory", BenchSettings(batches=3, batch_edges=20))
    assert len(report.rows) == 3
    assert report.summary == {}


def test_window_sweep():
    report = run_suite("window-sweep", BenchSettings(batches=3, batch_edges=20, walks=5, walk_length=3))
    assert [row["window_batches"] for row in report.rows] == list(WINDOW_SWEEP_BATCHES)
    retained = [row["retained"] for row in report.rows]
    assert retained == sorted(retained)


def test_as_record():
    record = run_suite("wwarp-sweep", SMALL).as_record()
    assert record["suite"] == "wwarp-sweep"
    assert len(record["rows"]) == len(WWARP_SWEEP)


def test_tier_percentages():
    store = build_index(hub_skewed_graph(150, 1_500, 7_500, seed=0))
    walkset = generate_walks(store, WalkConfig(walk_length=4, walks_per_node=3), SMALL.thresholds)
    percentages = tier_percentages(walkset)
    assert set(percentages) == {"solo", "warp-cached", "warp-direct", "block-cached", "block-direct"}
    assert sum(percentages.values()) == pytest.approx(100.0)


def test_every_suite_is_registered():
    assert set(SUITES) == {"scaling", "wwarp-sweep", "ablation", "memory", "window-sweep"}

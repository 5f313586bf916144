"""
Deterministic synthetic temporal graphs for tests and benchmarks.
"""

import numpy as np

from tempowalk.edge_store import EdgeBatch


def chain_graph(length: int, *, start_time: int = 1) -> EdgeBatch:
    """
    The path 0 -> 1 -> ... -> length with edge i at time start_time + i.
    """
    nodes = np.arange(length, dtype=np.int64)
    return EdgeBatch.from_arrays(nodes, nodes + 1, nodes + start_time)


def uniform_temporal_graph(num_nodes: int, num_edges: int, time_span: int, *, seed: int = 0) -> EdgeBatch:
    """
    Endpoints drawn uniformly from `num_nodes` nodes, timestamps uniformly from [0, time_span).
    """
    rng = np.random.default_rng(seed)
    return EdgeBatch.from_arrays(
        rng.integers(0, num_nodes, size=num_edges),
        rng.integers(0, num_nodes, size=num_edges),
        np.sort(rng.integers(0, time_span, size=num_edges)),
    )


def zipf_popularity(num_nodes: int, exponent: float) -> np.ndarray:
    weights = 1.0 / np.arange(1, num_nodes + 1, dtype=np.float64) ** exponent
    return weights / weights.sum()


def hub_skewed_graph(
    num_nodes: int,
    num_edges: int,
    time_span: int,
    *,
    exponent: float = 1.0,
    aligned_hubs: int = 8,
    rank_shift: int = 64,
    seed: int = 0,
) -> EdgeBatch:
    """
    Sources and targets drawn with Zipf-like popularity, so a few nodes receive most walks and own most edges.

    Node `i` has in-popularity rank `i`. The first `aligned_hubs` nodes hold the same out-popularity rank, which
    makes them busy hubs with many timestamp groups; every other node's out-rank is its in-rank rotated by
    `rank_shift`, so moderately visited nodes also own long edge lists. Together this spreads walk groups over
    every (W, G) region of the dispatch plane.
    """
    rng = np.random.default_rng(seed)
    in_popularity = zipf_popularity(num_nodes, exponent)
    tail = np.arange(aligned_hubs, num_nodes)
    out_order = np.concatenate((np.arange(min(aligned_hubs, num_nodes)), np.roll(tail, -rank_shift)))
    out_popularity = np.empty(num_nodes, dtype=np.float64)
    out_popularity[out_order] = in_popularity
    return EdgeBatch.from_arrays(
        rng.choice(num_nodes, size=num_edges, p=out_popularity),
        rng.choice(num_nodes, size=num_edges, p=in_popularity),
        np.sort(rng.integers(0, time_span, size=num_edges)),
    )


def mega_hub_graph(spokes: int = 2000, *, hub: int = 0) -> EdgeBatch:
    """
    Every spoke feeds the hub early, and the hub fans back out to every spoke later.

    With per-node starts, every spoke walk reaches the hub on its first hop, so the hub hosts
    `walks_per_node * spokes` co-located walks at the first scheduling step.
    """
    spoke_ids = np.arange(1, spokes + 1, dtype=np.int64) + hub
    inbound_times = np.arange(spokes, dtype=np.int64)
    outbound_times = inbound_times + spokes
    hubs = np.full(spokes, hub, dtype=np.int64)
    return EdgeBatch.from_arrays(
        np.concatenate((spoke_ids, hubs)),
        np.concatenate((hubs, spoke_ids)),
        np.concatenate((inbound_times, outbound_times)),
    )

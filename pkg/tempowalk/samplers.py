"""
Temporal bias samplers.

Index-based pickers invert the cumulative mass of a position-dependent weight in closed form, the weight-based
picker binary-searches a prefix array, and Node2Vec second-order bias is layered on top by rejection sampling.
All pickers follow one boundary convention: with F(k) the cumulative mass before index k, draw `u` maps to the
unique k with F(k) <= u < F(k + 1). `oracle_pick` is the brute-force reference for that convention.

Pickers accept scalars or numpy arrays for `u` and `n`, and return an `int` or an int64 array accordingly.
"""

import enum
from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple, overload

import numpy as np
import numpy.typing as npt

from tempowalk.edge_store import EdgeStore, WalkDirection
from tempowalk.errors import ConfigError, ContractViolationError

IndexArray = npt.NDArray[np.int64]
FloatArray = npt.NDArray[np.float64]

# Above this, e^n overflows a double and the exponential picker uses its asymptotic form
EXPONENTIAL_EXACT_LIMIT = 700


class BiasKind(enum.StrEnum):
    UNIFORM_INDEX = "uniform-index"
    LINEAR_INDEX = "linear-index"
    EXPONENTIAL_INDEX = "exponential-index"
    EXPONENTIAL_WEIGHT = "exponential-weight"

    @property
    def is_index_based(self) -> bool:
        return self is not BiasKind.EXPONENTIAL_WEIGHT


class AdjacencyScope(enum.StrEnum):
    WINDOW = "window"
    FUTURE = "future"


@dataclass(frozen=True)
class Node2VecParams:
    """
    Return parameter `p`, in-out parameter `q`, and the per-hop cap on rejection attempts (`None` for no cap).
    """

    p: float
    q: float
    max_attempts: int | None = 64

    def __post_init__(self) -> None:
        if not (self.p > 0 and self.q > 0):
            msg = f"Node2Vec p and q must be positive, got p={self.p}, q={self.q}"
            raise ConfigError(msg)
        if self.max_attempts is not None and self.max_attempts < 1:
            msg = f"max_attempts must be at least 1 or None, got {self.max_attempts}"
            raise ConfigError(msg)

    @property
    def beta_max(self) -> float:
        return max(1.0 / self.p, 1.0, 1.0 / self.q)


class CumulativeWeights(NamedTuple):
    prefix: FloatArray
    total: float


def _require_positive(n: npt.ArrayLike) -> IndexArray:
    counts = np.asarray(n, dtype=np.int64)
    if np.any(counts < 1):
        msg = "cannot sample from an empty range (n must be at least 1)"
        raise ContractViolationError(msg)
    return counts


@overload
def _result(indices: IndexArray, u: float, n: int) -> int: ...


@overload
def _result(indices: IndexArray, u: npt.ArrayLike, n: npt.ArrayLike) -> int | IndexArray: ...


def _result(indices: IndexArray, u: npt.ArrayLike, n: npt.ArrayLike) -> int | IndexArray:
    if np.ndim(u) == 0 and np.ndim(n) == 0:
        return int(indices)
    return indices


def _snap_to_cells(
    k: IndexArray,
    u: FloatArray,
    n: IndexArray,
    cdf: Callable[[IndexArray, IndexArray], FloatArray],
    rounds: int = 2,
) -> IndexArray:
    """
    Moves closed-form candidates onto the cell that contains u, comparing against the same floating-point
    cumulative values the oracle uses.
    """
    k = np.clip(k, 0, n - 1)
    for _ in range(rounds):
        k = np.where((k > 0) & (cdf(k, n) > u), k - 1, k)
        k = np.where((k + 1 < n) & (cdf(np.minimum(k + 1, n - 1), n) <= u), k + 1, k)
    return k


def _uniform_cdf(k: IndexArray, n: IndexArray) -> FloatArray:
    return k.astype(np.float64) / n.astype(np.float64)


def _linear_cdf(k: IndexArray, n: IndexArray) -> FloatArray:
    kf = k.astype(np.float64)
    nf = n.astype(np.float64)
    return (kf * (kf + 1.0) / 2.0) / (nf * (nf + 1.0) / 2.0)


# Prefix sums of e^i, i < EXPONENTIAL_EXACT_LIMIT, with a leading zero
_EXPONENTIAL_PREFIX = np.concatenate(
    ([0.0], np.cumsum(np.exp(np.arange(EXPONENTIAL_EXACT_LIMIT, dtype=np.float64)))),
)


def _exponential_cdf(k: IndexArray, n: IndexArray) -> FloatArray:
    return _EXPONENTIAL_PREFIX[k] / _EXPONENTIAL_PREFIX[n]


def pick_index_uniform(u: npt.ArrayLike, n: npt.ArrayLike) -> int | IndexArray:
    """
    Uniform picker, i = floor(u * n).
    """
    counts = _require_positive(n)
    draws = np.asarray(u, dtype=np.float64)
    k = np.floor(draws * counts).astype(np.int64)
    return _result(_snap_to_cells(k, draws, counts, _uniform_cdf), u, n)


def pick_index_linear(u: npt.ArrayLike, n: npt.ArrayLike) -> int | IndexArray:
    """
    Linear picker with mass proportional to i + 1, i = floor((-1 + sqrt(1 + 4u n (n + 1))) / 2).
    """
    counts = _require_positive(n)
    draws = np.asarray(u, dtype=np.float64)
    nf = counts.astype(np.float64)
    k = np.floor((-1.0 + np.sqrt(1.0 + 4.0 * draws * nf * (nf + 1.0))) / 2.0).astype(np.int64)
    return _result(_snap_to_cells(k, draws, counts, _linear_cdf), u, n)


def pick_index_exponential(u: npt.ArrayLike, n: npt.ArrayLike) -> int | IndexArray:
    """
    Exponential picker with mass proportional to e^i, i = floor(ln(1 + u (e^n - 1))).

    For n above `EXPONENTIAL_EXACT_LIMIT` the asymptotic form floor(n + ln u) is used instead.
    """
    counts = _require_positive(n)
    draws = np.asarray(u, dtype=np.float64)
    nf = counts.astype(np.float64)
    exact = counts <= EXPONENTIAL_EXACT_LIMIT
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        exact_k = np.log1p(draws * np.expm1(np.where(exact, nf, 0.0)))
        asymptotic_k = nf + np.log(draws)
    k = np.floor(np.where(exact, exact_k, asymptotic_k))
    k = np.clip(np.where(np.isfinite(k), k, 0.0).astype(np.int64), 0, counts - 1)
    snapped = _snap_to_cells(k, draws, np.minimum(counts, EXPONENTIAL_EXACT_LIMIT), _exponential_cdf)
    return _result(np.where(exact, snapped, k), u, n)


def pick_index(bias: BiasKind, u: npt.ArrayLike, n: npt.ArrayLike) -> int | IndexArray:
    """
    Dispatches to the index picker of the given bias.
    """
    if bias is BiasKind.UNIFORM_INDEX:
        return pick_index_uniform(u, n)
    if bias is BiasKind.LINEAR_INDEX:
        return pick_index_linear(u, n)
    if bias is BiasKind.EXPONENTIAL_INDEX:
        return pick_index_exponential(u, n)
    msg = f"{bias} is not an index-based bias"
    raise ContractViolationError(msg)


def build_cumulative_weights(times: npt.ArrayLike, scale: float = 1.0) -> CumulativeWeights:
    """
    Builds the prefix array of exp((t_i - t_min) / scale) over a time-sorted neighborhood.

    When the span would overflow a double, every weight is divided by exp((t_max - t_min) / scale); the
    distribution the prefix array encodes is unchanged.

    Raises:
        ContractViolationError: If `times` is empty.
    """
    times = np.asarray(times, dtype=np.int64)
    if not times.size:
        msg = "cannot build cumulative weights for an empty neighborhood"
        raise ContractViolationError(msg)
    exponents = (times - times[0]).astype(np.float64) / scale
    if exponents[-1] > EXPONENTIAL_EXACT_LIMIT:
        exponents -= exponents[-1]
    prefix = np.cumsum(np.exp(exponents))
    return CumulativeWeights(prefix, float(prefix[-1]))


def pick_weighted(u: npt.ArrayLike, cw: CumulativeWeights) -> int | IndexArray:
    """
    Returns the smallest k with prefix[k] >= u * total.
    """
    draws = np.asarray(u, dtype=np.float64)
    k = np.searchsorted(cw.prefix, draws * cw.total, side="left").astype(np.int64)
    k = np.minimum(k, cw.prefix.size - 1)
    return int(k) if np.ndim(u) == 0 else k


def oracle_pick(u: npt.ArrayLike, weights: npt.ArrayLike) -> int | IndexArray:
    """
    Brute-force reference picker: the k with F(k) <= u < F(k + 1), F(k) being the normalized mass before k.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if not weights.size:
        msg = "oracle_pick needs at least one weight"
        raise ContractViolationError(msg)
    cumulative = np.concatenate(([0.0], np.cumsum(weights)))
    bounds = cumulative / cumulative[-1]
    k = np.searchsorted(bounds, np.asarray(u, dtype=np.float64), side="right") - 1
    k = np.clip(k, 0, weights.size - 1).astype(np.int64)
    return int(k) if np.ndim(u) == 0 else k


def sample_start_edges(
    store: EdgeStore,
    bias: BiasKind,
    u1: npt.ArrayLike,
    u2: npt.ArrayLike,
    direction: WalkDirection = WalkDirection.FORWARD,
) -> IndexArray:
    """
    Vectorized start-edge selection: `u1` picks a timestamp group under `bias`, `u2` picks uniformly within it.

    Backward walks mirror the group order, so the bias favors the earliest groups instead of the latest.

    Returns:
        Indices into the store's shared edge array.
    """
    groups_total = store.ts_group_count
    if not groups_total:
        msg = "cannot sample a start edge from an empty store"
        raise ContractViolationError(msg)
    u1 = np.asarray(u1, dtype=np.float64)
    if bias.is_index_based:
        position = np.asarray(pick_index(bias, u1, np.full(u1.shape, groups_total)), dtype=np.int64)
    else:
        prefix = store.ts_group_forward_prefix
        if direction is WalkDirection.BACKWARD:
            prefix = store.ts_group_backward_prefix
        position = np.asarray(pick_weighted(u1, CumulativeWeights(prefix, float(prefix[-1]))), dtype=np.int64)
    group = position if direction is WalkDirection.FORWARD else groups_total - 1 - position
    start = store.ts_group_offsets[group]
    size = store.ts_group_offsets[group + 1] - start
    return start + np.asarray(pick_index_uniform(np.asarray(u2, dtype=np.float64), size), dtype=np.int64)


def sample_start_edge(
    store: EdgeStore,
    bias: BiasKind,
    u1: float,
    u2: float,
    direction: WalkDirection = WalkDirection.FORWARD,
) -> int:
    return int(sample_start_edges(store, bias, np.array([u1]), np.array([u2]), direction)[0])


def node2vec_beta(
    prev: npt.ArrayLike,
    candidates: npt.ArrayLike,
    adjacent: npt.ArrayLike,
    params: Node2VecParams,
) -> FloatArray:
    """
    Second-order bias: 1/p when returning to `prev`, 1 when the candidate neighbors `prev`, 1/q otherwise.
    """
    prev = np.asarray(prev)
    candidates = np.asarray(candidates)
    return np.where(
        candidates == prev,
        1.0 / params.p,
        np.where(np.asarray(adjacent, dtype=bool), 1.0, 1.0 / params.q),
    )


def node2vec_accept(
    prev: int,
    candidate: int,
    params: Node2VecParams,
    adjacent: Callable[[int, int], bool] | bool,
    u_accept: float,
) -> bool:
    """
    Accepts a proposed candidate with probability beta(prev, candidate) / beta_max.
    """
    is_adjacent = adjacent(prev, candidate) if callable(adjacent) else adjacent
    beta = float(node2vec_beta(prev, candidate, is_adjacent, params))
    return u_accept < beta / params.beta_max

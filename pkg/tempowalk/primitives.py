"""
Data-parallel building blocks shared by index construction and per-step scheduling.

Every function here is a whole-array numpy operation; none of them loops over elements in Python. The names follow
the primitives a GPU implementation would launch (PartitionFlagged, SortPairs, RunLengthEncode, ExScan), plus a
lane-parallel binary search where each lane searches its own half-open range of a shared sorted array.
"""

from typing import Literal

import numpy as np
import numpy.typing as npt

IndexArray = npt.NDArray[np.int64]

_SEARCH_SIDES = ("left", "right")


def partition_flagged(flags: npt.ArrayLike) -> IndexArray:
    """
    Returns the indices of the flagged positions, in ascending order (a stable compaction).
    """
    return np.flatnonzero(np.asarray(flags, dtype=bool)).astype(np.int64, copy=False)


def sort_pairs(keys: npt.ArrayLike, values: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """
    Sorts `(key, value)` pairs by key. The sort is stable, so pairs with equal keys keep their input order.
    """
    keys = np.asarray(keys)
    values = np.asarray(values)
    order = np.argsort(keys, kind="stable")
    return keys[order], values[order]


def run_length_encode(sorted_keys: npt.ArrayLike) -> tuple[np.ndarray, IndexArray]:
    """
    Collapses runs of equal adjacent keys.

    Returns:
        The key of every run and the length of every run.
    """
    sorted_keys = np.asarray(sorted_keys)
    if sorted_keys.size == 0:
        return sorted_keys[:0], np.zeros(0, dtype=np.int64)
    starts = run_starts(sorted_keys)
    lengths = np.diff(np.append(starts, sorted_keys.size))
    return sorted_keys[starts], lengths.astype(np.int64, copy=False)


def run_starts(*keys: npt.ArrayLike) -> IndexArray:
    """
    Returns the start index of every maximal run over which all of the given key arrays stay constant.
    """
    arrays = [np.asarray(key) for key in keys]
    size = arrays[0].size
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    changed = np.zeros(size - 1, dtype=bool)
    for array in arrays:
        changed |= array[1:] != array[:-1]
    return np.concatenate(([0], np.flatnonzero(changed) + 1)).astype(np.int64, copy=False)


def exclusive_scan(values: npt.ArrayLike) -> IndexArray:
    """
    Exclusive prefix sum: element i is the sum of values[:i].
    """
    values = np.asarray(values, dtype=np.int64)
    scanned = np.zeros(values.size, dtype=np.int64)
    if values.size > 1:
        np.cumsum(values[:-1], out=scanned[1:])
    return scanned


def offsets_from_counts(counts: npt.ArrayLike) -> IndexArray:
    """
    Turns per-bucket counts into an offset array of length len(counts) + 1 whose last entry is the total.
    """
    counts = np.asarray(counts, dtype=np.int64)
    offsets = np.zeros(counts.size + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets


def segmented_searchsorted(
    values: npt.ArrayLike,
    lo: npt.ArrayLike,
    hi: npt.ArrayLike,
    targets: npt.ArrayLike,
    side: Literal["left", "right"] = "left",
) -> IndexArray:
    """
    Binary-searches every lane's target inside that lane's own range `values[lo:hi]`.

    `values[lo:hi]` must be non-decreasing for every lane; the array as a whole need not be. The result for lane k
    matches `lo[k] + np.searchsorted(values[lo[k]:hi[k]], targets[k], side)`, computed for all lanes at once in
    O(log(max range)) vectorized rounds.
    """
    if side not in _SEARCH_SIDES:
        msg = f"side must be 'left' or 'right', got {side!r}"
        raise ValueError(msg)
    values = np.asarray(values)
    low = np.array(lo, dtype=np.int64, copy=True, ndmin=1)
    high = np.array(hi, dtype=np.int64, copy=True, ndmin=1)
    targets = np.broadcast_to(np.asarray(targets), low.shape)

    active = np.flatnonzero(low < high)
    while active.size:
        mid = (low[active] + high[active]) >> 1
        pivot = values[mid]
        if side == "left":
            go_right = pivot < targets[active]
        else:
            go_right = pivot <= targets[active]
        low[active[go_right]] = mid[go_right] + 1
        high[active[~go_right]] = mid[~go_right]
        active = active[low[active] < high[active]]
    return low

"""
Counter-based random numbers keyed by (seed, walk_id, hop_index, draw_ordinal).

A draw depends only on its key, never on how many draws were taken before it or in which order walks were
processed. This is what lets the cooperative scheduler and the full-walk baseline produce identical walks.
"""

import numpy as np
import numpy.typing as npt

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_SHIFT_30 = np.uint64(30)
_SHIFT_27 = np.uint64(27)
_SHIFT_31 = np.uint64(31)
_SHIFT_11 = np.uint64(11)
_ORDINAL_BITS = np.uint64(24)
_MASK_64 = (1 << 64) - 1

# Ordinals used by the walk engine within one (walk, hop) key
ORDINAL_PICK = 0
ORDINAL_WITHIN_GROUP = 1


def _splitmix64(state: npt.NDArray[np.uint64]) -> npt.NDArray[np.uint64]:
    z = state + _GOLDEN
    z = (z ^ (z >> _SHIFT_30)) * _MIX_1
    z = (z ^ (z >> _SHIFT_27)) * _MIX_2
    return z ^ (z >> _SHIFT_31)


def _as_u64(values: npt.ArrayLike) -> npt.NDArray[np.uint64]:
    return np.asarray(values, dtype=np.int64).astype(np.uint64)


class CounterRNG:
    """
    Stateless uniform generator. `uniform` maps every key to a float64 in the open interval (0, 1).
    """

    def __init__(self, seed: int) -> None:
        self.seed = int(seed)
        self._seed_state = _splitmix64(np.array([self.seed & _MASK_64], dtype=np.uint64))[0]

    def bits(
        self,
        walk_ids: npt.ArrayLike,
        hop: npt.ArrayLike,
        ordinal: npt.ArrayLike = ORDINAL_PICK,
    ) -> npt.NDArray[np.uint64]:
        walk_u64, hop_u64, ordinal_u64 = np.broadcast_arrays(_as_u64(walk_ids), _as_u64(hop), _as_u64(ordinal))
        state = _splitmix64(self._seed_state ^ walk_u64)
        return _splitmix64(state ^ ((hop_u64 << _ORDINAL_BITS) | ordinal_u64))

    def uniform(
        self,
        walk_ids: npt.ArrayLike,
        hop: npt.ArrayLike,
        ordinal: npt.ArrayLike = ORDINAL_PICK,
    ) -> npt.NDArray[np.float64]:
        # Top 53 bits, centred in their cell so that 0 and 1 are never produced
        mantissa = (self.bits(walk_ids, hop, ordinal) >> _SHIFT_11).astype(np.float64)
        return (mantissa + 0.5) * 2.0**-53

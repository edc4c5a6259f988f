"""Counter-based random streams for the fleet simulation.

Every (seed, season) pair owns an independent Philox stream: the seed is
the Philox key and the season index is placed in the high words of the
counter. Draw ``i`` of a season belongs to the asset at position ``i`` of the
id-sorted fleet, so results do not depend on how the work is split.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def season_generator(seed: int, season: int) -> np.random.Generator:
    if seed < 0 or season < 0:
        raise ValueError("seed and season must be non-negative")
    key = seed & ((1 << 128) - 1)
    return np.random.Generator(np.random.Philox(key=key, counter=season << 128))


def season_uniforms(seed: int, season: int, n: int) -> np.ndarray:
    return season_generator(seed, season).random(n)

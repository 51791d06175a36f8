"""Counter-based random streams.

Every random draw in the package comes from a Philox generator keyed by a 64-bit seed
and a 64-bit stream index, so the stream for image ``i`` does not depend on how many
other images were processed before it.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for (seed, index)"""
    key = ((int(index) & _MASK64) << 64) | (int(seed) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(seed: int, *words: int) -> int:
    """Deterministically mix a seed with extra words (epoch, purpose tag, ...) into a new 64-bit seed"""
    entropy = [int(seed) & _MASK64] + [int(w) & _MASK64 for w in words]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])

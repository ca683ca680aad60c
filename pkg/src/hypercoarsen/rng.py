"""Named, independently reproducible random streams derived from one 64-bit seed.

Each pipeline stage draws from ``stream(seed, name, *keys)``; the stream depends
only on the seed, the stage name and the keys, never on how much randomness other
stages consumed.  Stage names in use: ``"embed"``, ``"kmeans"`` (keyed by hyperedge
id) and ``"baseline"``; partitioning is deterministic and draws nothing.
"""
import zlib

import numpy as np


def stream(seed: int, name: str, *keys: int) -> np.random.Generator:
    tag = zlib.crc32(name.encode("ascii"))
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(tag, *map(int, keys)))
    return np.random.default_rng(ss)

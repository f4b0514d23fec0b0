"""Counter-based random substreams.

A stream is addressed by a root seed plus a tuple of integer keys, so the
numbers drawn for (seed, rep, replicate) never depend on how many other
streams were created before it or on which worker creates it.
"""

from __future__ import annotations

import numpy as np


def seed_sequence(seed, *keys: int) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(int(seed))
    return np.random.SeedSequence(root.entropy, spawn_key=tuple(root.spawn_key) + tuple(int(k) for k in keys))


def substream(seed, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *keys)))

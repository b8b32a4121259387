"""Seeded random streams.

All randomness flows from one root seed. Each pipeline stage draws from its
own stream, keyed by a stable label, so adding or reordering stages never
perturbs the draws of existing ones. The label is hashed to a spawn key for
numpy's SeedSequence; the (root_seed, label) pair fully determines the
stream.
"""
import hashlib

import numpy as np


def spawn_key(label):
    """Stable 128-bit spawn key derived from a text label."""
    h = hashlib.sha256(label.encode("utf-8")).digest()
    return tuple(int.from_bytes(h[i:i + 4], "little") for i in range(0, 16, 4))


def stream(root_seed, label):
    """Independent Generator for (root_seed, label).

    Parameters
    ----------
    root_seed : int
        64-bit experiment seed.
    label : str
        Stage name, e.g. "counts", "bell-restarts".
    """
    ss = np.random.SeedSequence(int(root_seed), spawn_key=spawn_key(label))
    return np.random.default_rng(ss)

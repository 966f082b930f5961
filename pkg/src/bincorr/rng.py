"""Seeded random streams shared by the state generators and the shot simulator."""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Return a Philox (counter-based, 64-bit) generator for `seed`.

    The same seed yields the same stream on every platform and NumPy
    release that keeps the Philox bit-stream stable.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(seed))

"""Counter-based seed derivation for reproducible parallel trials.

A global seed expands into per-trial seeds via
``SeedSequence((global_seed, *indices))``; the derived integer is stable
across runs and platforms, so any trial can be reproduced in isolation.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_seed", "generator_for"]


def derive_seed(global_seed: int, *indices: int) -> int:
    """Deterministic child seed for trial ``indices`` under ``global_seed``."""
    ss = np.random.SeedSequence((int(global_seed),) + tuple(int(i) for i in indices))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generator_for(global_seed: int, *indices: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(global_seed, *indices)))

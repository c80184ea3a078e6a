"""
Seed-sequence scheme for per-record seeds.

Record i of repeat k under master seed m gets
    SeedSequence(m, spawn_key=(k,)).spawn(n)[i].generate_state(1)[0]
so every record seed depends only on (m, k, i) and never on execution order.
"""
from typing import List

import numpy as np

from sagnac_toolbox.utils.errors import InvalidArgumentError


def derive_seeds(master_seed: int, count: int, *key: int) -> List[int]:
    """Derive count independent 32 bit seeds.

    Args:
        master_seed: Non-negative master seed.
        count: Number of seeds to derive.
        key: Extra integers identifying the stream, e.g. the repeat index.

    Returns: List of seeds.
    """
    if master_seed < 0:
        raise InvalidArgumentError('master_seed', f'must be >= 0, got {master_seed}')
    sequence = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return [int(child.generate_state(1)[0]) for child in sequence.spawn(count)]

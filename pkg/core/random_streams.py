"""Deterministic random stream derivation.

Every consumer of randomness gets its own ``numpy.random.Generator`` built from
a ``SeedSequence`` keyed by the user seed plus a stream tag and extra keys, so
streams never share state and adding a consumer never perturbs another.
"""

from typing import Union
import numpy as np


NETWORK_STREAM = 0
SEED_STREAM = 1
RULE_STREAM = 2
WORK_ITEM_STREAM = 3

_UINT64_MASK = (1 << 64) - 1

RngLike = Union[np.random.Generator, int, None]


def seed_sequence(rng_seed: int, *keys: int) -> np.random.SeedSequence:
    """Build a seed sequence from the base seed and integer keys."""
    return np.random.SeedSequence([int(rng_seed) & _UINT64_MASK, *(int(k) for k in keys)])


def derive_rng(rng_seed: int, *keys: int) -> np.random.Generator:
    """Return an independent generator for ``(rng_seed, *keys)``."""
    return np.random.default_rng(seed_sequence(rng_seed, *keys))


def derive_seed(rng_seed: int, *keys: int) -> int:
    """Return a 64-bit unsigned child seed for ``(rng_seed, *keys)``."""
    return int(seed_sequence(rng_seed, *keys).generate_state(1, np.uint64)[0])


def as_generator(rng: RngLike) -> np.random.Generator:
    """Coerce a generator, an integer seed or None into a generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.default_rng(seed_sequence(0, RULE_STREAM))
    return derive_rng(rng, RULE_STREAM)

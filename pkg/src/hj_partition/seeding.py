"""Derivable, counter-based random streams.

Every random decision in the package draws from a Philox generator whose
SeedSequence is keyed by (seed, purpose, index...), so independent tasks get
independent streams and results do not depend on evaluation order.
"""

import zlib

import numpy as np
from numpy.random import Generator, Philox, SeedSequence


def _key_word(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if part < 0:
        raise ValueError("stream keys must be non-negative")
    return part


def make_seed(seed: int, *key: int | str) -> SeedSequence:
    """SeedSequence for `seed` refined by a stream key."""
    return SeedSequence(entropy=seed & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(_key_word(k) for k in key))


def derive_rng(seed: int, *key: int | str) -> Generator:
    """A Philox generator for the stream (seed, *key)."""
    return Generator(Philox(make_seed(seed, *key)))


def sample_subset(rng: Generator, n: int, size: int) -> tuple[int, ...]:
    """A uniformly random `size`-subset of range(n), sorted."""
    if size > n:
        raise ValueError(f"cannot draw {size} of {n}")
    picked = rng.choice(n, size=size, replace=False)
    return tuple(sorted(int(v) for v in np.asarray(picked)))

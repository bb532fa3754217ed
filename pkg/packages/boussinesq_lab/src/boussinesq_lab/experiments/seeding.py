"""
Named random streams derived from one integer seed.

Every stream is ``SeedSequence(seed, spawn_key=(crc32(name),))``, so a
sub-experiment draws the same numbers whether or not its siblings run.
"""

from __future__ import annotations

import zlib

import numpy as np

from ..errors import InvalidInputError


def stream_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def seed_sequence(seed: int, name: str) -> np.random.SeedSequence:
    if seed < 0:
        raise InvalidInputError(f"seed must be >= 0, got {seed}")
    return np.random.SeedSequence(seed, spawn_key=(stream_key(name),))


def stream(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, name))

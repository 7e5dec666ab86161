"""Reproducible random streams.

All randomness in a run descends from one integer master seed through
:class:`numpy.random.SeedSequence` spawn keys, so results do not depend on
how work is split across processes.  Trials are grouped into fixed-size
blocks; each block owns three independent generators (point positions,
fault draws, edge keys).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BLOCK_SIZE = 256


@dataclass
class BlockStreams:
    points: np.random.Generator
    faults: np.random.Generator
    edges: np.random.Generator

    def edge_key(self) -> np.uint64:
        return self.edges.integers(0, 2**64, dtype=np.uint64, endpoint=False)


def block_streams(master_seed: int, block: int, *tag: int) -> BlockStreams:
    """Generators for trial block ``block`` of a run seeded by ``master_seed``.

    ``tag`` lets one run keep several independent estimators apart
    (e.g. one per survivor count).
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(*tag, block))
    p, f, e = ss.spawn(3)
    return BlockStreams(
        np.random.Generator(np.random.PCG64(p)),
        np.random.Generator(np.random.PCG64(f)),
        np.random.Generator(np.random.PCG64(e)),
    )


def trial_blocks(trials: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    """Split ``trials`` into ``(block_index, size)`` pairs."""
    out = []
    b = 0
    left = trials
    while left > 0:
        k = min(block_size, left)
        out.append((b, k))
        left -= k
        b += 1
    return out


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)

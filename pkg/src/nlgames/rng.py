"""Counter-based random streams derived from one 64-bit master seed.

Each (seed, stream) pair keys a Philox generator.  Trial ``t`` of a run
reads the block of draws starting at counter ``t * blocks_per_trial``, so
the numbers a trial sees do not depend on how trials are chunked or
ordered.
"""
from __future__ import annotations

import numpy as np

REFEREE, ALICE, BOB = 0, 1, 2
SEED_LIMIT = 2**64
_DRAWS_PER_BLOCK = 4  # Philox-4x64 yields four doubles per counter step


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
    return seed


def stream_key(seed: int, stream: int) -> np.ndarray:
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(stream,))
    return ss.generate_state(2, dtype=np.uint64)


def stream_generator(seed: int, stream: int, counter: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=stream_key(seed, stream), counter=counter))


def trial_uniforms(seed: int, stream: int, start: int, stop: int, per_trial: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials ``start..stop-1``; shape (stop - start, per_trial)."""
    if not 0 <= start <= stop:
        raise ValueError("need 0 <= start <= stop")
    blocks = -(-per_trial // _DRAWS_PER_BLOCK)
    gen = stream_generator(seed, stream, counter=start * blocks)
    raw = gen.random((stop - start) * blocks * _DRAWS_PER_BLOCK)
    return raw.reshape(stop - start, blocks * _DRAWS_PER_BLOCK)[:, :per_trial]

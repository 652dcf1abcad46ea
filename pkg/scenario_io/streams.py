"""
Deterministic, label-separated random streams

Every stochastic component draws from its own PCG64 stream derived from the
run seed and a label ("scenario", "mc", "ga", ...). Streams with different
labels are statistically independent; the same (seed, label) always replays
the same draws.
"""
import hashlib
from typing import Any, Dict

import numpy as np

from models.errors import InvalidParameterError


def _label_key(label: str) -> list:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]


def seeded_stream(seed: int, label: str) -> np.random.Generator:
    """Create the PCG64 generator for (seed, label)"""
    if int(seed) < 0:
        raise InvalidParameterError(f"seeds must be non-negative integers, got {seed}")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=_label_key(label))
    return np.random.Generator(np.random.PCG64(sequence))


def stream_state(rng: np.random.Generator) -> Dict[str, Any]:
    """Serializable snapshot of a stream, for checkpointing"""
    return rng.bit_generator.state


def restore_stream(state: Dict[str, Any]) -> np.random.Generator:
    bit_generator = np.random.PCG64()
    bit_generator.state = state
    return np.random.Generator(bit_generator)

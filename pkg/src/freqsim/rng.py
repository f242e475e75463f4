"""Seeded random streams.

Every replicate of every simulation draws from its own stream, keyed by
``(seed, stream_id)``. The stream's bit generator is Philox (counter based)
with a key derived from both integers, so replicate ``k`` can be rebuilt
directly without touching replicates ``0..k-1`` and results never depend on
how replicates are scheduled across workers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_UINT64_MAX = 2**64 - 1

# Smallest standard deviation accepted by the samplers. Anything below this
# is treated as a degenerate (point mass) request rather than a distribution.
SD_FLOOR = 1e-10


@dataclass(frozen=True)
class RandomStream:
    """Identifies one reproducible random sequence.

    Parameters
    ----------
    seed : int
        Run-level seed, 0 <= seed < 2**64.
    stream_id : int
        Replicate index, 0 <= stream_id < 2**64.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if not 0 <= int(value) <= _UINT64_MAX:
                raise ValueError(f"{name} must fit in 64 unsigned bits, got {value}")

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(seq))

    def substream(self, stream_id: int) -> "RandomStream":
        return RandomStream(self.seed, stream_id)


def _check_count(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _check_sd(sd, name="sd"):
    if not np.isfinite(sd) or sd <= SD_FLOOR:
        raise ValueError(f"{name} must be a positive finite number above {SD_FLOOR}, got {sd!r}")


def sample_normal(stream: RandomStream, mean: float, sd: float, n: int) -> np.ndarray:
    """Draw ``n`` normal(mean, sd) values from the start of ``stream``."""
    _check_sd(sd)
    n = _check_count(n)
    return mean + sd * stream.generator().standard_normal(n)


def sample_lognormal(stream: RandomStream, meanlog: float, sdlog: float, n: int) -> np.ndarray:
    """Draw ``n`` lognormal values parameterized on the log scale.

    ``log`` of the result is normal(meanlog, sdlog).
    """
    _check_sd(sdlog, "sdlog")
    n = _check_count(n)
    return np.exp(meanlog + sdlog * stream.generator().standard_normal(n))

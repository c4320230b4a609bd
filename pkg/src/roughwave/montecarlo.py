"""Counter-based random streams and simplex sampling.

Every chunk of samples draws from its own Philox stream keyed by
(seed, *key, chunk index), so results do not depend on how chunks are
scheduled, and sums are reduced in chunk order.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

CHUNK = 1 << 16


def derive_seed(master: int, *labels) -> int:
    """Stable 64-bit seed from a master seed and arbitrary labels."""
    text = ":".join([str(int(master)), *map(str, labels)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def ordered_simplex(rng: np.random.Generator, size: int, n: int, t: float) -> np.ndarray:
    """Uniform points 0 < s_1 < ... < s_n < t; the density is n!/t^n."""
    return np.sort(rng.random((size, n)) * t, axis=1)


def simplex_volume(n: int, t: float) -> float:
    return t**n / math.factorial(n)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int

    @property
    def error(self) -> float:
        """Three standard errors."""
        return 3.0 * self.std_error


def mc_mean(weights: Callable[[np.random.Generator, int], np.ndarray],
            samples: int, seed: int, *key: int) -> MCEstimate:
    """Sample mean of ``weights(rng, size)`` over chunked, independently keyed streams."""
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk = 0
    while done < samples:
        size = min(CHUNK, samples - done)
        w = weights(stream(seed, *key, chunk), size)
        total += math.fsum(w)
        total_sq += math.fsum(w * w)
        done += size
        chunk += 1
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return MCEstimate(mean, math.sqrt(var / max(samples - 1, 1)), samples)

"""Seeded sampling primitives: temperature sampling and batch seed derivation."""

from __future__ import annotations

import math
import random

from ..errors import EmptyWeights, InvalidParams, NonPositiveWeight

_MASK64 = (1 << 64) - 1

# SplitMix64 finalizer constants (Steele et al.); mixing the batch index
# through this keeps per-output streams decorrelated even for small seeds.
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix_seed(seed: int, index: int) -> int:
    """Derive the 64-bit seed for batch item `index` from the request seed."""
    z = (seed + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def derive_rng(seed: int, index: int) -> random.Random:
    return random.Random(mix_seed(seed, index))


def temperature_sample(weights: list[float], temperature: float, rng: random.Random) -> int:
    """Draw an index with probability proportional to weight^(1/temperature).

    The engine accepts any temperature > 0; the request validator narrows the
    range before anything reaches this sampler.
    """
    if not weights:
        raise EmptyWeights("no candidates to sample from")
    if temperature <= 0:
        raise InvalidParams(f"temperature must be > 0, got {temperature}")
    for w in weights:
        if w <= 0:
            raise NonPositiveWeight(f"weight {w} <= 0")

    if len(weights) == 1:
        return 0

    exponent = 1.0 / temperature
    # scale by the max weight so large weights cannot overflow exp
    log_max = math.log(max(weights))
    scaled = [math.exp(exponent * (math.log(w) - log_max)) for w in weights]
    total = sum(scaled)
    point = rng.random() * total
    acc = 0.0
    for i, s in enumerate(scaled):
        acc += s
        if point < acc:
            return i
    return len(weights) - 1

"""Seeding contract for reproducible simulations.

Every simulation draws from ``numpy.random.Generator(PCG64(seed))`` where
``seed`` is an unsigned 64-bit integer. Ensemble replicate ``r`` of a run
seeded with ``seed`` uses

    replicate_seed(seed, r) = splitmix64((seed + (r + 1) * 0x9E3779B97F4A7C15) mod 2**64)

with the standard SplitMix64 finalizer. Exponential sojourns are drawn by
inversion, ``-log1p(-U) / rate`` with ``U = Generator.random()``.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replicate_seed(seed: int, index: int) -> int:
    return splitmix64((seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def switching_times(lambda0: float, lambda1: float, regime0: int, horizon: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Jump times in ``(0, horizon]`` of the two-state chain started in ``regime0``.

    Sojourns alternate between the regimes, so only their durations are random.
    """
    rates = np.array([lambda0, lambda1])
    mean_gap = 0.5 * (1.0 / lambda0 + 1.0 / lambda1)
    chunk = max(64, int(1.2 * horizon / mean_gap) + 64)
    times = []
    t = 0.0
    parity = 0
    while t <= horizon:
        u = rng.random(chunk)
        regs = (regime0 + parity + np.arange(chunk)) % 2
        gaps = -np.log1p(-u) / rates[regs]
        cum = t + np.cumsum(gaps)
        times.append(cum)
        t = cum[-1]
        parity = (parity + chunk) % 2
    out = np.concatenate(times)
    return out[out <= horizon]

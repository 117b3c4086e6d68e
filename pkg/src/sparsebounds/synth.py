"""Reproducible synthetic streams.

Generator: xorshift64* seeded through splitmix64, fully specified so that any
language can regenerate the same stream::

    state = splitmix64(seed)            # increment 0x9E3779B97F4A7C15,
                                        # mixers 0xBF58476D1CE4E5B9, 0x94D049BB133111EB
    next():  x ^= x >> 12; x ^= x << 25; x ^= x >> 27   (mod 2^64)
             return x * 0x2545F4914F6CDD1D              (mod 2^64)
    uniform01() = (next() >> 11) * 2^-53                # [0, 1)

``uniform`` samples the cube ``[-1, 1)^dim`` as ``2 u - 1``. ``gaussian``
draws standard normals by Box-Muller, ``sqrt(-2 ln(1 - u1)) cos(2 pi u2)``,
consuming two uniforms per coordinate (the sine branch is not used).
Coordinates are filled row by row.
"""
from __future__ import annotations

import math

import numpy as np

MASK = (1 << 64) - 1


def splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be unsigned")
        self.state = splitmix64(seed & MASK) or 1  # zero is a fixed point

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK

    def uniform01(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def normal(self) -> float:
        u1 = self.uniform01()
        u2 = self.uniform01()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)


DISTRIBUTIONS = ("gaussian", "uniform")


def generate(n: int, dim: int, distribution: str = "gaussian", seed: int = 0) -> np.ndarray:
    """``(n, dim)`` samples from the seeded generator."""
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be positive")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    rng = XorShift64Star(seed)
    draw = rng.normal if distribution == "gaussian" else (lambda: 2.0 * rng.uniform01() - 1.0)
    return np.array([[draw() for _ in range(dim)] for _ in range(n)])

"""SplitMix64: a tiny, portable 64-bit generator for reproducible objectives.

The stream for a given seed is fixed by the published constants below, so
reports are byte-identical across platforms and Python versions.
"""
from __future__ import annotations

__all__ = ["SplitMix64", "random_objective", "random_cost"]

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (rejection sampling, no modulo bias)."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            v = self.next_u64()
            if v < limit:
                return lo + v % span

    def fork(self, label: int) -> SplitMix64:
        """An independent stream derived from this one and an integer label."""
        return SplitMix64(self.next_u64() ^ ((label * 0xD1B54A32D192ED03) & _MASK))


def random_objective(rng: SplitMix64, length: int, bound: int = 9) -> list[int]:
    return [rng.randint(-bound, bound) for _ in range(length)]


def random_cost(rng: SplitMix64, n: int, bound: int = 9) -> list[list[int]]:
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]

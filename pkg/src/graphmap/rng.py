"""SplitMix64, the single pseudo-random source for the whole pipeline.

The generator is pinned by name so that golden files reproduce on every
platform. Reference vectors (Vigna's ``splitmix64.c``):

    seed 0        -> 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, ...
    seed 1234567  -> 6457827717110365317, 3203168211198807973, ...

Doubles are the top 53 bits scaled by 2**-53, so they lie in [0, 1).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# Stage offsets XORed into the run seed. Adding a stage never perturbs
# the streams of the stages listed before it.
LAYOUT_STAGE = 1
SITES_STAGE = 2


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        if seed < 0 or seed > MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


def seeded_rng(seed: int) -> SplitMix64:
    return SplitMix64(seed)


def stage_rng(seed: int, stage: int) -> SplitMix64:
    return SplitMix64((seed ^ stage) & MASK64)

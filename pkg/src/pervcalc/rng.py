"""SplitMix64: a tiny, fully specified 64-bit generator.

Used instead of :mod:`random` so that seeded streams are fixed by this file
alone and replay identically on every platform and Python version.
"""

from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *indices: int) -> int:
    """Independent per-trial seed from a base seed and an index path."""
    s = seed & MASK
    for i in indices:
        s = mix64((s + GOLDEN * (i + 1)) & MASK)
    return s


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow: n must be positive")
        # rejection sampling keeps the distribution exactly uniform
        limit = MASK + 1 - ((MASK + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform on the closed interval [lo, hi]."""
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        return self.randbelow(den) < num

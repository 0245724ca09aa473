"""SplitMix64: a tiny, fully specified generator so seeds reproduce anywhere.

Reference constants follow Steele, Lea & Flood (2014). Floats take the top
53 bits of each output: ``u = (z >> 11) * 2**-53``.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform on [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def spawn(self, stream: int) -> "SplitMix64":
        """Independent child generator for a numbered stream."""
        child = SplitMix64(self.next_u64() ^ ((stream * GOLDEN) & MASK64))
        return child

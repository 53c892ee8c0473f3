"""Counter-based pseudo-random numbers for reproducible sampling.

Every draw is a pure function of ``(seed, stream, index)``, so independent
runs (and, if needed, workers) can compute draws without sharing state.
Mixing is the splitmix64 finalizer.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def draw(seed: int, stream: int, index: int) -> float:
    """Uniform double in [0, 1) for draw ``index`` of ``stream`` under ``seed``."""
    word = _mix(_mix(_mix(seed & _MASK64) ^ (stream & _MASK64)) ^ (index & _MASK64))
    return (word >> 11) * (1.0 / (1 << 53))


class CounterRng:
    """``random()``-compatible source over one (seed, stream) pair."""

    __slots__ = ("seed", "stream", "index")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed
        self.stream = stream
        self.index = 0

    def random(self) -> float:
        value = draw(self.seed, self.stream, self.index)
        self.index += 1
        return value

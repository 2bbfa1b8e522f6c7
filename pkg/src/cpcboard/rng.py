"""Deterministic 64-bit pseudo-random generator used wherever the search
or the response surface needs randomness.

The generator is splitmix64: the state walks a Weyl sequence and the output
is the mixed state.  The full recurrence, so that any independent
implementation reproduces every stream bit for bit:

    state  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z      = state
    z      = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z      = (z XOR (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output = z XOR (z >> 31)

Floats are built from the top 53 bits of an output word, so every draw is
an exact IEEE-754 double and identical on any platform.  Named substreams
are derived by folding FNV-1a hashes of the stream labels into the seed,
never by consuming draws from a parent stream.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """The splitmix64 output mix of a 64-bit word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash; stable across platforms and languages."""
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & _MASK64
    return h


def _key64(key: int | str) -> int:
    if isinstance(key, str):
        return fnv1a64(key.encode("utf-8"))
    return key & _MASK64


def derive_seed(seed: int, *keys: int | str) -> int:
    """Fold labels into ``seed`` to name an independent substream."""
    h = seed & _MASK64
    for key in keys:
        h = mix64(h ^ _key64(key))
    return h


def unit_hash(seed: int, *keys: int | str) -> float:
    """One-shot uniform draw in [0, 1) keyed by (seed, *keys)."""
    return (mix64(derive_seed(seed, *keys) + _GOLDEN) >> 11) * _INV_2_53


class SplitMix64:
    """Sequential splitmix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), bias-free via threshold rejection."""
        if n <= 0:
            raise ValueError("randrange() bound must be positive")
        threshold = (1 << 64) % n
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % n

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

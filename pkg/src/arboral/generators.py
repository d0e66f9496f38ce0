"""Deterministic permutation instances.

Random instances use numpy's PCG64 bit generator, seeded through
``SeedSequence(seed)``, and a Fisher-Yates shuffle written here. Bounded
integers come from rejection sampling on masked raw 64-bit draws, so the
result depends only on the PCG64 bit stream, which numpy keeps stable across
versions and platforms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .geometry import Instance

PATTERNS = ("sequential", "reverse", "random", "bit_reversal", "zigzag")


@dataclass(frozen=True)
class GeneratorSpec:
    pattern: str
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {self.pattern!r}; expected one of {', '.join(PATTERNS)}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.pattern == "bit_reversal" and self.n & (self.n - 1):
            raise ValueError("bit_reversal needs n to be a power of two")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class _Draws:
    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound == 1:
            return 0
        mask = (1 << (bound - 1).bit_length()) - 1
        while True:
            v = int(self._bits.random_raw()) & mask
            if v < bound:
                return v


def shuffled(n: int, seed: int) -> list[int]:
    keys = list(range(1, n + 1))
    draws = _Draws(seed)
    for i in range(n - 1, 0, -1):
        j = draws.below(i + 1)
        keys[i], keys[j] = keys[j], keys[i]
    return keys


def _bit_reverse(v: int, bits: int) -> int:
    out = 0
    for _ in range(bits):
        out = (out << 1) | (v & 1)
        v >>= 1
    return out


def generate(spec: GeneratorSpec) -> Instance:
    n = spec.n
    if spec.pattern == "sequential":
        keys = list(range(1, n + 1))
    elif spec.pattern == "reverse":
        keys = list(range(n, 0, -1))
    elif spec.pattern == "random":
        keys = shuffled(n, spec.seed)
    elif spec.pattern == "bit_reversal":
        bits = n.bit_length() - 1
        keys = [1 + _bit_reverse(t, bits) for t in range(n)]
    else:
        lo, hi, keys = 1, n, []
        while lo <= hi:
            keys.append(lo)
            lo += 1
            if lo <= hi:
                keys.append(hi)
                hi -= 1
    return Instance(tuple(keys))


def enumerate_permutations(n: int) -> Iterator[Instance]:
    """All ``n!`` instances in lexicographic order of their access sequences."""
    for perm in itertools.permutations(range(1, n + 1)):
        yield Instance(perm)

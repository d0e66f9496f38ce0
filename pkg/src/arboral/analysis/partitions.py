from __future__ import annotations

from dataclasses import dataclass

from ..geometry import PreconditionError


@dataclass(frozen=True, order=True)
class Region:
    """Inclusive block of consecutive key columns ``lo..hi``."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise PreconditionError(f"invalid region {self.lo}..{self.hi}")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, item) -> bool:
        x = item if isinstance(item, int) else item[0]
        return self.lo <= x <= self.hi

    def check(self, n: int) -> None:
        if self.hi > n:
            raise PreconditionError(f"region {self.lo}..{self.hi} exceeds n={n}")


@dataclass(frozen=True, order=True)
class Partition:
    """Adjacent key blocks P | Q.

    Equal halves in general; dyadic splits of an odd block give P the extra key.
    """

    p_block: Region
    q_block: Region

    def __post_init__(self):
        if self.p_block.hi + 1 != self.q_block.lo:
            raise PreconditionError("P and Q must be adjacent")
        if self.p_block.size - self.q_block.size not in (0, 1):
            raise PreconditionError("P must equal Q in length, or exceed it by one")

    @classmethod
    def at(cls, j: int, k: int) -> Partition:
        return cls(Region(j, j + k - 1), Region(j + k, j + 2 * k - 1))

    @property
    def k(self) -> int:
        return self.p_block.size

    def as_list(self) -> list[int]:
        return [self.p_block.lo, self.p_block.hi, self.q_block.lo, self.q_block.hi]

    def check(self, n: int) -> None:
        self.q_block.check(n)


def dyadic_partitions(n: int) -> list[Partition]:
    """Every split made by recursive halving of 1..n, at every level."""
    out = []
    stack = [(1, n)]
    while stack:
        lo, hi = stack.pop()
        m = hi - lo + 1
        if m < 2:
            continue
        mid = lo + (m + 1) // 2 - 1
        out.append(Partition(Region(lo, mid), Region(mid + 1, hi)))
        stack.append((lo, mid))
        stack.append((mid + 1, hi))
    return sorted(out)


def half_partitions(n: int, ks=None) -> list[Partition]:
    """All contiguous equal-half partitions, optionally only for half-lengths in ``ks``."""
    sizes = range(1, n // 2 + 1) if ks is None else sorted(set(ks))
    out = []
    for k in sizes:
        for j in range(1, n - 2 * k + 2):
            out.append(Partition.at(j, k))
    return sorted(out)

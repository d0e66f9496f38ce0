"""Points, permutation instances and the arboral-satisfaction predicate.

Keys run along x and time along y, both 1-based. A pair of points is
satisfied when the two share a column or a row, or when a third point of the
set lies in their closed axis-aligned rectangle (boundary included).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels


class PreconditionError(ValueError):
    """An operation was called outside its contract."""


class InstanceError(ValueError):
    """Malformed or non-permutation access sequence."""

    def __init__(self, message: str, line: int | None = None):
        self.detail = message
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class Point(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Instance:
    """A permutation access sequence; ``access[t - 1]`` is the key read at time ``t``."""

    access: tuple[int, ...]

    def __post_init__(self):
        for k in self.access:
            if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
                raise InstanceError(f"non-integer key {k!r}")
        keys = tuple(int(k) for k in self.access)
        object.__setattr__(self, "access", keys)
        n = len(keys)
        if n == 0:
            raise InstanceError("empty access sequence")
        seen = set()
        for t, key in enumerate(keys, start=1):
            if not 1 <= key <= n:
                raise InstanceError(f"key {key} at time {t} outside 1..{n}", line=t)
            if key in seen:
                raise InstanceError(f"key {key} repeated at time {t}", line=t)
            seen.add(key)

    @property
    def n(self) -> int:
        return len(self.access)

    def key_at(self, t: int) -> int:
        return self.access[t - 1]

    def time_of(self, key: int) -> int:
        return self._times[key - 1]

    @cached_property
    def _times(self) -> tuple[int, ...]:
        times = [0] * self.n
        for t, key in enumerate(self.access, start=1):
            times[key - 1] = t
        return tuple(times)

    @cached_property
    def points(self) -> tuple[Point, ...]:
        """Base points in time order."""
        return tuple(Point(key, t) for t, key in enumerate(self.access, start=1))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.access, dtype=np.int64)

    def mirror_keys(self) -> Instance:
        """Reflect x -> n + 1 - x."""
        return Instance(tuple(self.n + 1 - k for k in self.access))

    def mirror_time(self) -> Instance:
        """Reflect y -> n + 1 - y."""
        return Instance(tuple(reversed(self.access)))

    def to_text(self) -> str:
        return "".join(f"{k}\n" for k in self.access)

    @classmethod
    def from_text(cls, text: str) -> Instance:
        keys, lines = [], []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                keys.append(int(line))
            except ValueError:
                raise InstanceError(f"not an integer: {line!r}", line=lineno) from None
            lines.append(lineno)
        if not keys:
            raise InstanceError("no accesses found")
        try:
            return cls(tuple(keys))
        except InstanceError as exc:
            # report the file line, not the access time
            if exc.line is None:
                raise
            raise InstanceError(exc.detail, line=lines[exc.line - 1]) from None

    @classmethod
    def read(cls, path) -> Instance:
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    def digest(self) -> str:
        """Content hash of the access sequence (sha256 of the text form)."""
        return hashlib.sha256(self.to_text().encode("ascii")).hexdigest()


@dataclass(frozen=True)
class AugmentedSet:
    """Base instance plus added grid points."""

    base: Instance
    added: frozenset[Point]

    def __post_init__(self):
        added = frozenset(Point(int(p[0]), int(p[1])) for p in self.added)
        object.__setattr__(self, "added", added)
        n = self.base.n
        base_points = set(self.base.points)
        for p in added:
            if not (1 <= p.x <= n and 1 <= p.y <= n):
                raise PreconditionError(f"added point {tuple(p)} outside the {n}x{n} grid")
            if p in base_points:
                raise PreconditionError(f"added point {tuple(p)} coincides with a base point")

    @property
    def points(self) -> frozenset[Point]:
        return self.added | frozenset(self.base.points)

    def is_satisfied(self) -> bool:
        return is_satisfied(self.points)


def _in_box(r, p, q) -> bool:
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def is_pair_satisfied(p, q, points) -> bool:
    p, q = Point(*p), Point(*q)
    if p == q:
        raise PreconditionError("a pair needs two distinct points")
    pts = points if isinstance(points, (set, frozenset)) else set(points)
    if p not in pts or q not in pts:
        raise PreconditionError("both points of the pair must belong to the set")
    if p.x == q.x or p.y == q.y:
        return True
    return any(r != p and r != q and _in_box(r, p, q) for r in pts)


def _pair_key(a, b):
    # order each pair as (smaller-x point, other point)
    return (a, b) if (a[0], a[1]) <= (b[0], b[1]) else (b, a)


def unsatisfied_pairs_reference(points) -> list[tuple[Point, Point]]:
    """All-pairs, cubic-time listing of unsatisfied pairs."""
    pts = sorted({Point(*p) for p in points})
    bad = []
    for p, q in combinations(pts, 2):
        if p.x == q.x or p.y == q.y:
            continue
        if not any(r != p and r != q and _in_box(r, p, q) for r in pts):
            bad.append(_pair_key(p, q))
    bad.sort()
    return bad


def is_satisfied_reference(points) -> bool:
    pts = sorted({Point(*p) for p in points})
    for p, q in combinations(pts, 2):
        if p.x == q.x or p.y == q.y:
            continue
        if not any(r != p and r != q and _in_box(r, p, q) for r in pts):
            return False
    return True


def _scan(points, limit: int):
    pts = list({tuple(p) for p in points})
    if len(pts) < 2:
        return []
    arr = np.asarray(pts)
    ux, xr = np.unique(arr[:, 0], return_inverse=True)
    uy, yr = np.unique(arr[:, 1], return_inverse=True)
    xr = xr.astype(np.int64) + 1
    yr = yr.astype(np.int64) + 1
    order = np.lexsort((xr, yr))
    row_x = np.ascontiguousarray(xr[order])
    ys = yr[order]
    row_y = np.unique(ys)
    row_ptr = np.searchsorted(ys, np.append(row_y, row_y[-1] + 1)).astype(np.int64)
    found = kernels.unsatisfied_scan(row_ptr, row_x, row_y, int(xr.max()), limit)
    ux, uy = ux.tolist(), uy.tolist()
    return [
        _pair_key(Point(ux[s - 1], uy[h - 1]), Point(ux[x - 1], uy[y - 1]))
        for s, h, x, y in found.tolist()
    ]


def unsatisfied_pairs(points) -> list[tuple[Point, Point]]:
    """Every unsatisfied pair, sorted by (smaller-x point, other point).

    Uses a bottom-to-top row sweep over column tops; a pair can only be
    unsatisfied when its lower point is the top of its column below the upper
    point's row. Coordinates are rank-compressed first, so any real values work.
    """
    return sorted(_scan(points, 0))


def is_satisfied(points) -> bool:
    return not _scan(points, 1)


def dump_points(n: int, points: Iterable, path=None) -> str:
    payload = {"n": int(n), "points": [[int(x), int(y)] for x, y in sorted(map(tuple, points))]}
    text = json.dumps(payload) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def load_points(source) -> tuple[int, list[Point]]:
    """Parse point-set JSON from a path or an already-decoded dict."""
    if isinstance(source, dict):
        payload = source
    else:
        with open(source, encoding="utf-8") as fh:
            payload = json.load(fh)
    return int(payload["n"]), [Point(int(x), int(y)) for x, y in payload["points"]]

"""Proof objects rebuilt from a trace: corner points, hidden/exposed states."""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..geometry import Point, PreconditionError
from ..greedy import GreedyTrace
from .partitions import Region

FOR_Q = "for_Q"
FOR_PL = "for_Pl"
HIDDEN = "hidden"
EXPOSED = "exposed"
NOT_ARRIVED = "not_arrived"


class TraceIndex:
    """Every point of X ∪ Y in row-major and column-major order.

    ``pred``/``succ`` give the nearest x on the same row to the left/right
    (0 and n + 1 when there is none). Column-major arrays are prefixed ``c``;
    a region's points form the contiguous slice ``region_slice(region)``.
    """

    def __init__(self, trace: GreedyTrace):
        n = trace.n
        self.n = n
        self.access = trace.instance.as_array()
        xs = np.concatenate((self.access, trace.added_x))
        ys = np.concatenate((np.arange(1, n + 1, dtype=np.int64), trace.added_y))
        base = np.zeros(xs.size, dtype=bool)
        base[:n] = True

        order = np.lexsort((xs, ys))
        xs, ys, base = xs[order], ys[order], base[order]
        self.row_x = np.ascontiguousarray(xs)
        self.row_ptr = np.searchsorted(ys, np.arange(1, n + 2)).astype(np.int64)
        same_row = ys[1:] == ys[:-1]
        pred = np.zeros(xs.size, np.int64)
        succ = np.full(xs.size, n + 1, np.int64)
        pred[1:][same_row] = xs[:-1][same_row]
        succ[:-1][same_row] = xs[1:][same_row]

        order = np.lexsort((ys, xs))
        self.cx, self.cy, self.cbase = xs[order], ys[order], base[order]
        self.cpred, self.csucc = pred[order], succ[order]
        self.ckey = self.access[self.cy - 1]
        self.col_ptr = np.searchsorted(self.cx, np.arange(1, n + 2)).astype(np.int64)
        self._corners = {}

    def region_slice(self, region: Region) -> slice:
        return slice(int(self.col_ptr[region.lo - 1]), int(self.col_ptr[region.hi]))

    def column(self, x: int) -> np.ndarray:
        return self.cy[self.col_ptr[x - 1]:self.col_ptr[x]]

    def column_top(self, x: int, t: int) -> int:
        """Highest y < t in column x, or 0."""
        col = self.column(x)
        i = int(np.searchsorted(col, t)) - 1
        return int(col[i]) if i >= 0 else 0

    def corner_series(self, region: Region):
        """``(counts, misses)`` from the region corner kernel, cached per region."""
        key = (region.lo, region.hi)
        if key not in self._corners:
            self._corners[key] = kernels.region_corners(
                self.row_ptr, self.row_x, self.access, region.lo, region.hi)
        return self._corners[key]


_INDEXES: "weakref.WeakKeyDictionary[GreedyTrace, TraceIndex]" = weakref.WeakKeyDictionary()


def trace_index(trace: GreedyTrace) -> TraceIndex:
    idx = _INDEXES.get(trace)
    if idx is None:
        idx = _INDEXES[trace] = TraceIndex(trace)
    return idx


@dataclass(frozen=True)
class CornerSnapshot:
    t: int
    region: Region
    side: str
    corners: frozenset


def _records(tops, xs):
    best, out = 0, []
    for x, h in zip(xs, tops):
        if h > best:
            out.append(Point(x, h))
            best = h
    return out


def maximal_points(points, side: str = FOR_Q) -> frozenset:
    """Corner points of an arbitrary point set under the side's dominance order."""
    rows: dict = {}
    for x, y in points:
        rows.setdefault(y, []).append(x)
    pick = max if side == FOR_Q else min
    out, edge = [], None
    for y in sorted(rows, reverse=True):
        x = pick(rows[y])
        if edge is None or (x != edge and pick(x, edge) == x):
            out.append(Point(x, y))
        edge = x if edge is None else pick(x, edge)
    return frozenset(out)


def corner_points(trace: GreedyTrace, region: Region, t: int, side: str = FOR_Q) -> CornerSnapshot:
    """Maximal points of the region placed before time ``t``.

    ``for_Q`` keeps points with nothing weakly up-and-right of them; ``for_Pl``
    mirrors that to up-and-left. Only column tops can qualify, and a top
    qualifies when it is strictly higher than every top on the dominating side.
    """
    if not 1 <= t <= trace.n + 1:
        raise PreconditionError(f"t={t} outside 1..{trace.n + 1}")
    if side not in (FOR_Q, FOR_PL):
        raise PreconditionError(f"unknown side {side!r}")
    region.check(trace.n)
    idx = trace_index(trace)
    xs = range(region.hi, region.lo - 1, -1) if side == FOR_Q else range(region.lo, region.hi + 1)
    xs = list(xs)
    tops = [idx.column_top(x, t) for x in xs]
    return CornerSnapshot(t, region, side, frozenset(_records(tops, xs)))


class CornerTracker:
    """Upper-right corner staircase of one region, advanced a time line at a time.

    Every point placed on line ``t`` is higher than anything before it, so the
    rightmost of them dominates all corners at or left of its column and every
    other point on the line.
    """

    def __init__(self, region: Region):
        self.region = region
        self._stack: list[Point] = []  # rightmost corner first

    @property
    def corners(self) -> frozenset:
        return frozenset(self._stack)

    def advance(self, row) -> None:
        inside = [Point(*p) for p in row if p[0] in self.region]
        if not inside:
            return
        r = max(inside)
        while self._stack and self._stack[-1].x <= r.x:
            self._stack.pop()
        self._stack.append(r)


def corner_timeline(trace: GreedyTrace, region: Region) -> list[frozenset]:
    """Corner sets for t = 1..n+1 (list index t - 1), maintained incrementally."""
    tracker = CornerTracker(region)
    out = [tracker.corners]
    for step in trace.steps:
        tracker.advance(step.added + (step.access,))
        out.append(tracker.corners)
    return out


def hidden_state(trace: GreedyTrace, region: Region, p, t: int) -> str:
    p = Point(*p)
    inst = trace.instance
    if p not in region:
        raise PreconditionError(f"point {tuple(p)} is outside region {region.lo}..{region.hi}")
    if not 1 <= p.x <= inst.n or inst.time_of(p.x) != p.y:
        raise PreconditionError(f"{tuple(p)} is not a base point")
    if t <= p.y:
        return NOT_ARRIVED
    idx = trace_index(trace)
    lo = int(idx.col_ptr[p.x - 1])
    col = idx.column(p.x)
    i = lo + int(np.searchsorted(col, t)) - 1
    flanked = idx.cpred[i] >= region.lo and idx.csucc[i] <= region.hi
    return HIDDEN if flanked else EXPOSED


@dataclass(frozen=True)
class ExposureTimeline:
    base_point: Point
    events: tuple  # ((t, state), ...), states alternate

    @property
    def changes(self) -> int:
        return len(self.events) - 1


def exposure_timeline(trace: GreedyTrace, region: Region) -> list[ExposureTimeline]:
    """State history of each base point in the region, compressed to changes.

    A column's top only changes when a point lands in it, so the state from
    ``t = y + 1`` on is fixed by the row neighbours of the point placed at ``y``.
    """
    region.check(trace.n)
    idx = trace_index(trace)
    out = []
    for x in range(region.lo, region.hi + 1):
        a, b = int(idx.col_ptr[x - 1]), int(idx.col_ptr[x])
        events = []
        for i in range(a, b):
            hidden = idx.cpred[i] >= region.lo and idx.csucc[i] <= region.hi
            state = HIDDEN if hidden else EXPOSED
            if not events or events[-1][1] != state:
                events.append((int(idx.cy[i]) + 1, state))
        out.append(ExposureTimeline(Point(x, int(idx.cy[a])), tuple(events)))
    return out

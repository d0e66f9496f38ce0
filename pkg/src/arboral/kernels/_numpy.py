"""Pure-numpy kernels. Same signatures and results as ``_numba``."""

import numpy as np

_EMPTY = np.empty(0, np.int64)


def _staircase(heights, floor):
    """Indices where ``heights`` strictly beats the running max (seeded with ``floor``)."""
    if heights.size == 0:
        return _EMPTY
    prev = np.empty_like(heights)
    prev[0] = floor
    np.maximum.accumulate(heights[:-1], out=prev[1:])
    np.maximum(prev, floor, out=prev)
    return np.flatnonzero(heights > prev)


def greedy_sweep(access):
    access = np.asarray(access, dtype=np.int64)
    n = access.shape[0]
    top = np.zeros(n + 2, np.int64)
    offsets = np.zeros(n + 1, np.int64)
    chunks = []
    size = 0
    for t in range(1, n + 1):
        x = int(access[t - 1])
        floor = top[x]
        left = (x - 1 - _staircase(top[x - 1:0:-1], floor))[::-1]
        right = x + 1 + _staircase(top[x + 1:n + 1], floor)
        cols = np.concatenate((left, right))
        top[cols] = t
        top[x] = t
        chunks.append(cols)
        size += cols.size
        offsets[t] = size
    added = np.concatenate(chunks) if chunks else _EMPTY.copy()
    return added.astype(np.int64), offsets


def unsatisfied_scan(row_ptr, row_x, row_y, width, limit):
    top = np.zeros(width + 2, np.int64)
    found = []
    for r in range(row_y.shape[0]):
        y = int(row_y[r])
        xs = row_x[row_ptr[r]:row_ptr[r + 1]]
        bounds = np.concatenate(([0], xs, [width + 1]))
        for j, x in enumerate(xs.tolist()):
            floor = top[x]
            lo = int(bounds[j])
            for s in (x - 1 - _staircase(top[x - 1:lo:-1], floor)).tolist():
                found.append((s, int(top[s]), x, y))
            hi = int(bounds[j + 2])
            for s in (x + 1 + _staircase(top[x + 1:hi], floor)).tolist():
                found.append((s, int(top[s]), x, y))
            if 0 < limit <= len(found):
                return np.array(found[:limit], dtype=np.int64).reshape(-1, 4)
        top[xs] = y
    return np.array(found, dtype=np.int64).reshape(-1, 4)


def region_corners(row_ptr, row_x, access, lo, hi):
    n = access.shape[0]
    k = hi - lo + 1
    ys = np.repeat(np.arange(1, n + 1, dtype=np.int64), np.diff(row_ptr))
    inside = (row_x >= lo) & (row_x <= hi)
    xs, ys = row_x[inside], ys[inside]
    # tops[t, c]: highest y < t in column hi - c (columns reversed)
    tops = np.zeros((n + 2, k), np.int64)
    tops[ys + 1, hi - xs] = ys
    np.maximum.accumulate(tops, axis=0, out=tops)
    prev = np.zeros_like(tops)
    np.maximum.accumulate(tops[:, :-1], axis=1, out=prev[:, 1:])
    corner = tops > prev
    counts = corner.sum(axis=1).astype(np.int64)
    counts[0] = 0
    keys = access[ys - 1]
    right = keys > hi
    miss_rows = ys[right][~corner[ys[right], hi - xs[right]]]
    misses = np.bincount(miss_rows, minlength=n + 2).astype(np.int64)
    return counts, misses

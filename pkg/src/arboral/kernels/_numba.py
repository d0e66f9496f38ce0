"""Numba-compiled kernels. Signatures and results match ``_numpy`` exactly."""

import numpy as np
from numba import njit


@njit(cache=True)
def _grow(buf, size):
    out = np.empty(max(2 * buf.shape[0], 16), dtype=buf.dtype)
    out[:size] = buf[:size]
    return out


@njit(cache=True)
def _grow2(buf, size):
    out = np.empty((max(2 * buf.shape[0], 16), buf.shape[1]), dtype=buf.dtype)
    out[:size] = buf[:size]
    return out


@njit(cache=True)
def greedy_sweep(access):
    n = access.shape[0]
    top = np.zeros(n + 2, np.int64)
    offsets = np.zeros(n + 1, np.int64)
    out = np.empty(4 * n + 16, np.int64)
    size = 0
    for t in range(1, n + 1):
        x = access[t - 1]
        start = size
        # a step emits at most n - 1 columns; room for that keeps the scans branch-free
        while out.shape[0] - size < n:
            out = _grow(out, size)
        # leftward staircase, emitted right-to-left then reversed
        run = top[x]
        s = x - 1
        while s >= 1 and run < t - 1:
            h = top[s]
            out[size] = s
            size += h > run
            run = max(run, h)
            s -= 1
        i, j = start, size - 1
        while i < j:
            out[i], out[j] = out[j], out[i]
            i += 1
            j -= 1
        run = top[x]
        s = x + 1
        while s <= n and run < t - 1:
            h = top[s]
            out[size] = s
            size += h > run
            run = max(run, h)
            s += 1
        for i in range(start, size):
            top[out[i]] = t
        top[x] = t
        offsets[t] = size
    return out[:size].copy(), offsets


@njit(cache=True)
def unsatisfied_scan(row_ptr, row_x, row_y, width, limit):
    top = np.zeros(width + 2, np.int64)
    out = np.empty((16, 4), np.int64)
    count = 0
    prev_y = 0
    for r in range(row_y.shape[0]):
        y = row_y[r]
        a = row_ptr[r]
        b = row_ptr[r + 1]
        for j in range(a, b):
            x = row_x[j]
            stop = row_x[j - 1] if j > a else 0
            run = top[x]
            s = x - 1
            while s > stop and run < prev_y:
                h = top[s]
                if h > run:
                    if count == out.shape[0]:
                        out = _grow2(out, count)
                    out[count, 0] = s
                    out[count, 1] = h
                    out[count, 2] = x
                    out[count, 3] = y
                    count += 1
                    if limit > 0 and count >= limit:
                        return out[:count].copy()
                    run = h
                s -= 1
            stop = row_x[j + 1] if j + 1 < b else width + 1
            run = top[x]
            s = x + 1
            while s < stop and run < prev_y:
                h = top[s]
                if h > run:
                    if count == out.shape[0]:
                        out = _grow2(out, count)
                    out[count, 0] = s
                    out[count, 1] = h
                    out[count, 2] = x
                    out[count, 3] = y
                    count += 1
                    if limit > 0 and count >= limit:
                        return out[:count].copy()
                    run = h
                s += 1
        for j in range(a, b):
            top[row_x[j]] = y
        prev_y = y
    return out[:count].copy()


@njit(cache=True)
def region_corners(row_ptr, row_x, access, lo, hi):
    n = access.shape[0]
    k = hi - lo + 1
    counts = np.zeros(n + 2, np.int64)
    misses = np.zeros(n + 2, np.int64)
    # staircase of corner columns: bottom is the rightmost (lowest) corner
    stack = np.empty(k, np.int64)
    in_stack = np.zeros(k, np.bool_)
    depth = 0
    for t in range(1, n + 1):
        counts[t] = depth
        a = row_ptr[t - 1]
        b = row_ptr[t]
        first = a + np.searchsorted(row_x[a:b], lo)
        last = a + np.searchsorted(row_x[a:b], hi, side="right")
        if first == last:
            continue
        key = access[t - 1]
        if key > hi:
            for j in range(first, last):
                if not in_stack[row_x[j] - lo]:
                    misses[t] += 1
        r = row_x[last - 1]
        while depth > 0 and stack[depth - 1] <= r:
            in_stack[stack[depth - 1] - lo] = False
            depth -= 1
        stack[depth] = r
        in_stack[r - lo] = True
        depth += 1
    counts[n + 1] = depth
    return counts, misses

"""Hot loops behind a backend switch.

Numba is used when importable unless ``ARBORAL_DISABLE_NUMBA`` is set to a
truthy value, in which case the pure-numpy implementations run instead. Both
backends return identical arrays; ``tests/test_kernels.py`` holds them to it.

Kernels
-------
greedy_sweep(access) -> (added_x, offsets)
    Full GreedyArb sweep over a 0-indexed access array (``access[t-1]`` is the
    key at time ``t``). Added columns of step ``t`` are
    ``added_x[offsets[t-1]:offsets[t]]``, ascending.
unsatisfied_scan(row_ptr, row_x, row_y, width, limit) -> int64[m, 4]
    Rows of ``(s, top_y, x, y)``: the column-top point ``(s, top_y)`` and the
    point ``(x, y)`` form an unsatisfied pair. Stops after ``limit`` pairs when
    ``limit > 0``.
region_corners(row_ptr, row_x, access, lo, hi) -> (counts, misses)
    ``counts[t]`` is the number of upper-right corner points among columns
    ``lo..hi`` using points with ``y < t``, for ``t = 1..n+1``. ``misses[t]``
    counts points added in the region at time ``t`` by an access right of the
    region whose column top was not such a corner.
"""

import os

from . import _numpy

_FLAG = "ARBORAL_DISABLE_NUMBA"


def _numba_wanted():
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


_nb = None
if _numba_wanted():
    try:
        from . import _numba as _nb
    except ImportError:  # pragma: no cover - numba missing
        _nb = None

BACKEND = "numba" if _nb is not None else "numpy"
_impl = _nb if _nb is not None else _numpy

greedy_sweep = _impl.greedy_sweep
unsatisfied_scan = _impl.unsatisfied_scan
region_corners = _impl.region_corners


def backends():
    """Map of every importable backend name to its kernel module."""
    found = {"numpy": _numpy}
    try:
        from . import _numba as nb
    except ImportError:  # pragma: no cover
        return found
    found["numba"] = nb
    return found

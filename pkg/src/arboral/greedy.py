"""GreedyArb: sweep the accesses by time, adding on each time line the
unique minimal set of points that satisfies every rectangle cornered at the
current access."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .geometry import AugmentedSet, Instance, Point, PreconditionError, _in_box


class SweepOrderError(PreconditionError):
    """A step was requested at or below a time already placed."""


class Frontier:
    """Topmost y placed so far in each key column (0 marks an empty column)."""

    def __init__(self, n: int):
        self.n = n
        self.tops = np.zeros(n + 2, dtype=np.int64)
        self.last_y = 0

    @classmethod
    def from_points(cls, n: int, points) -> Frontier:
        frontier = cls(n)
        for x, y in points:
            frontier.tops[x] = max(frontier.tops[x], y)
            frontier.last_y = max(frontier.last_y, y)
        return frontier

    def top(self, x: int) -> int | None:
        y = int(self.tops[x])
        return y or None

    def place(self, points) -> None:
        for x, y in points:
            if y < self.tops[x]:
                raise SweepOrderError(f"point {(x, y)} lies below column top {self.tops[x]}")
            self.tops[x] = y
            self.last_y = max(self.last_y, y)

    def copy(self) -> Frontier:
        other = Frontier(self.n)
        other.tops = self.tops.copy()
        other.last_y = self.last_y
        return other


def greedy_step(frontier: Frontier, p) -> list[Point]:
    """Points GreedyArb adds on line ``y = p.y``; ``frontier`` is left untouched.

    Walking away from ``p`` in each direction, a column gets a point exactly
    when its top is strictly higher than every column top between it and ``p``
    (the top of ``p``'s own column included).
    """
    p = Point(*p)
    if p.y <= frontier.last_y:
        raise SweepOrderError(f"access at y={p.y} is not above the frontier (y={frontier.last_y})")
    tops = frontier.tops
    floor = int(tops[p.x])
    left = []
    run = floor
    for s in range(p.x - 1, 0, -1):
        if tops[s] > run:
            left.append(Point(s, p.y))
            run = int(tops[s])
    right = []
    run = floor
    for s in range(p.x + 1, frontier.n + 1):
        if tops[s] > run:
            right.append(Point(s, p.y))
            run = int(tops[s])
    return left[::-1] + right


def brute_force_step(prior, p) -> list[Point]:
    """Reference step: for every earlier point r with an unsatisfied box r-p, add (r.x, p.y)."""
    p = Point(*p)
    pts = [Point(*r) for r in prior]
    if any(r.y >= p.y for r in pts):
        raise SweepOrderError("prior points must lie strictly below the access")
    support = pts + [p]
    cols = set()
    for r in pts:
        if r.x == p.x:
            continue
        if not any(w != r and w != p and _in_box(w, r, p) for w in support):
            cols.add(r.x)
    return [Point(x, p.y) for x in sorted(cols)]


@dataclass(frozen=True)
class AddedStep:
    t: int
    access: Point
    added: tuple[Point, ...]
    parent_of: dict


@dataclass(frozen=True, eq=False)
class GreedyTrace:
    """Per-step record of a GreedyArb run.

    Added columns of step ``t`` are ``added_x[offsets[t-1]:offsets[t]]``
    (ascending); every added point of step ``t`` has ``y = t``.
    """

    instance: Instance
    added_x: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        for name in ("added_x", "offsets"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def added_count(self) -> int:
        return int(self.added_x.shape[0])

    def step_columns(self, t: int) -> np.ndarray:
        return self.added_x[self.offsets[t - 1]:self.offsets[t]]

    def step_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def added_y(self) -> np.ndarray:
        ys = np.repeat(np.arange(1, self.n + 1, dtype=np.int64), self.step_sizes())
        ys.setflags(write=False)
        return ys

    @cached_property
    def steps(self) -> tuple[AddedStep, ...]:
        inst = self.instance
        out = []
        for t in range(1, self.n + 1):
            added = tuple(Point(int(x), t) for x in self.step_columns(t))
            parents = {q: Point(q.x, inst.time_of(q.x)) for q in added}
            out.append(AddedStep(t, Point(inst.key_at(t), t), added, parents))
        return tuple(out)

    def added_points(self) -> list[Point]:
        return [Point(int(x), int(y)) for x, y in zip(self.added_x, self.added_y)]

    def augmented(self) -> AugmentedSet:
        return AugmentedSet(self.instance, frozenset(self.added_points()))

    def parent_violations(self) -> list[Point]:
        """Added points whose column's base point is not strictly below them."""
        times = np.asarray(self.instance._times, dtype=np.int64)
        bad = times[self.added_x - 1] >= self.added_y
        return [Point(int(x), int(y)) for x, y in zip(self.added_x[bad], self.added_y[bad])]

    def frontier_at(self, t: int) -> Frontier:
        """Frontier as it stood just before step ``t`` (``t = n + 1`` gives the final one)."""
        inst = self.instance
        pts = [(inst.key_at(s), s) for s in range(1, t)]
        stop = self.offsets[t - 1]
        pts += [(int(x), int(y)) for x, y in zip(self.added_x[:stop], self.added_y[:stop])]
        return Frontier.from_points(self.n, pts)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "access": list(self.instance.access),
            "instance_hash": self.instance.digest(),
            "steps": [
                {"t": t, "added_x": self.step_columns(t).tolist()} for t in range(1, self.n + 1)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, payload: dict) -> GreedyTrace:
        inst = Instance(tuple(payload["access"]))
        if int(payload["n"]) != inst.n:
            raise ValueError("trace n does not match its access sequence")
        steps = sorted(payload["steps"], key=lambda s: s["t"])
        if [s["t"] for s in steps] != list(range(1, inst.n + 1)):
            raise ValueError("trace must carry exactly one step per time 1..n")
        cols = [np.asarray(s["added_x"], dtype=np.int64) for s in steps]
        offsets = np.concatenate(([0], np.cumsum([c.size for c in cols])))
        added = np.concatenate(cols) if cols else np.empty(0, np.int64)
        return cls(inst, added, offsets)

    def stats_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "access_key", "num_added", "cumulative_added"])
        sizes = self.step_sizes()
        for t in range(1, self.n + 1):
            writer.writerow([t, self.instance.key_at(t), int(sizes[t - 1]), int(self.offsets[t])])
        return buf.getvalue()


def run(instance: Instance) -> GreedyTrace:
    added_x, offsets = kernels.greedy_sweep(instance.as_array())
    return GreedyTrace(instance, added_x, offsets)


def run_stepwise(instance: Instance) -> GreedyTrace:
    """Same sweep driven through :func:`greedy_step` one access at a time."""
    frontier = Frontier(instance.n)
    cols, offsets = [], [0]
    for p in instance.points:
        added = greedy_step(frontier, p)
        frontier.place(added)
        frontier.place([p])
        cols.extend(q.x for q in added)
        offsets.append(len(cols))
    return GreedyTrace(instance, np.asarray(cols, dtype=np.int64), np.asarray(offsets))


def added_count(trace: GreedyTrace) -> int:
    return trace.added_count

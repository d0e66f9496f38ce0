"""Exact minimum augmentation for small instances.

``min_arb`` runs iterative deepening over the number of added grid points.
Each node branches on the lexicographically first unsatisfied pair: any
satisfying superset must put a point inside that pair's closed rectangle, so
trying every free grid cell there (in increasing (x, y) order) is complete.
Nodes are pruned when a packing of unsatisfied pairs with pairwise disjoint
free cells already needs more points than the remaining budget.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import combinations

from . import greedy
from .geometry import Instance, Point, is_satisfied_reference, unsatisfied_pairs

EXACT = "exact"
BUDGET_EXHAUSTED = "budget_exhausted"
DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class OracleResult:
    optimal_added: frozenset
    size: int
    status: str
    nodes_expanded: int = 0
    n: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "status": self.status,
            "size": self.size,
            "points": [list(p) for p in sorted(self.optimal_added)],
            "nodes_expanded": self.nodes_expanded,
        }


def grid_candidates(instance: Instance) -> set[Point]:
    n = instance.n
    base = set(instance.points)
    return {Point(x, y) for x in range(1, n + 1) for y in range(1, n + 1)} - base


def default_size_limit(n: int) -> int:
    return n * math.ceil(math.log2(n)) + n if n > 1 else n


class _OutOfNodes(Exception):
    pass


def _free_cells(a, b, occupied):
    x0, x1 = sorted((a[0], b[0]))
    y0, y1 = sorted((a[1], b[1]))
    return [Point(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)
            if (x, y) not in occupied]


def _packing_bound(pairs, occupied) -> int:
    """Greedy count of unsatisfied pairs whose free cells are pairwise disjoint."""
    boxes = sorted((frozenset(_free_cells(a, b, occupied)) for a, b in pairs), key=len)
    used: set = set()
    count = 0
    for cells in boxes:
        if used.isdisjoint(cells):
            used |= cells
            count += 1
    return count


class _Search:
    def __init__(self, instance: Instance, node_budget: int):
        self.base = frozenset(instance.points)
        self.budget = node_budget
        self.nodes = 0

    def solve(self, k: int):
        self.seen = set()
        return self._dfs(self.base, (), k)

    def _dfs(self, current, added, remaining):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfNodes
        pairs = unsatisfied_pairs(current)
        if not pairs:
            return added
        if remaining == 0 or _packing_bound(pairs, current) > remaining:
            return None
        a, b = pairs[0]
        for cell in _free_cells(a, b, current):
            key = frozenset(added + (cell,))
            if key in self.seen:
                continue
            self.seen.add(key)
            found = self._dfs(current | {cell}, added + (cell,), remaining - 1)
            if found is not None:
                return found
        return None


def min_arb(instance: Instance, size_limit: int | None = None,
            node_budget: int = DEFAULT_NODE_BUDGET) -> OracleResult:
    """Smallest added grid set making ``instance`` arborally satisfied.

    On budget or size-limit exhaustion the GreedyArb solution is returned as
    the best known answer, flagged ``budget_exhausted``.
    """
    if size_limit is None:
        size_limit = default_size_limit(instance.n)
    if size_limit < 0 or node_budget <= 0:
        raise ValueError("size_limit must be >= 0 and node_budget > 0")
    search = _Search(instance, node_budget)
    try:
        for k in range(size_limit + 1):
            found = search.solve(k)
            if found is not None:
                return OracleResult(frozenset(found), len(found), EXACT, search.nodes, instance.n)
    except _OutOfNodes:
        search.nodes = node_budget
    fallback = frozenset(greedy.run(instance).added_points())
    return OracleResult(fallback, len(fallback), BUDGET_EXHAUSTED, search.nodes, instance.n)


def min_arb_exhaustive(instance: Instance) -> tuple[int, frozenset]:
    """Plain enumeration of candidate subsets by increasing size (reference checker)."""
    base = list(instance.points)
    cands = sorted(grid_candidates(instance))
    for k in range(len(cands) + 1):
        for subset in combinations(cands, k):
            if is_satisfied_reference(base + list(subset)):
                return k, frozenset(subset)
    raise AssertionError("the full grid is always satisfied")


@dataclass(frozen=True)
class RatioRow:
    index: int
    n: int
    instance_hash: str
    greedy_total: int
    opt_total: int
    status: str

    @property
    def ratio(self) -> float:
        return self.greedy_total / self.opt_total


@dataclass
class RatioReport:
    rows: list = field(default_factory=list)

    @property
    def exact_rows(self):
        return [r for r in self.rows if r.status == EXACT]

    @property
    def max_ratio(self) -> float | None:
        rows = self.exact_rows
        return max(r.ratio for r in rows) if rows else None

    @property
    def mean_ratio(self) -> float | None:
        rows = self.exact_rows
        return sum(r.ratio for r in rows) / len(rows) if rows else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "n", "instance_hash", "greedy_total", "opt_total", "ratio", "status"])
        for r in self.rows:
            writer.writerow([r.index, r.n, r.instance_hash, r.greedy_total, r.opt_total,
                             f"{r.ratio:.6f}", r.status])
        return buf.getvalue()


def ratio_report(instances, size_limit: int | None = None,
                 node_budget: int = DEFAULT_NODE_BUDGET) -> RatioReport:
    """Greedy versus optimum totals (base points included) per instance."""
    report = RatioReport()
    for index, inst in enumerate(instances):
        g = greedy.run(inst).added_count
        opt = min_arb(inst, size_limit, node_budget)
        report.rows.append(RatioRow(index, inst.n, inst.digest(), inst.n + g,
                                    inst.n + opt.size, opt.status))
    return report

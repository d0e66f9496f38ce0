"""Runtime checks of the competitive-analysis inequalities on a GreedyArb trace.

Every check reports the measured quantity next to its bound. Hard checks must
hold on any valid trace; soft checks record internal claims whose failure is
evidence, not an error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..greedy import GreedyTrace
from .partitions import Partition, Region, dyadic_partitions, half_partitions
from .state import trace_index


@dataclass(frozen=True)
class LemmaCheck:
    lemma: str
    holds: bool
    measured: int
    bound: int
    witness: str | None = None
    hard: bool = True

    def to_dict(self) -> dict:
        out = {"lemma": self.lemma, "holds": self.holds, "measured": self.measured,
               "bound": self.bound, "hard": self.hard}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _check(lemma, holds, measured, bound, witness=None, hard=True) -> LemmaCheck:
    return LemmaCheck(lemma, bool(holds), int(measured), int(bound),
                      None if holds else witness, hard)


def verify_corner_growth(trace: GreedyTrace, partition: Partition) -> tuple[LemmaCheck, ...]:
    """An access inside P adds at most one corner of P (for Q)."""
    idx = trace_index(trace)
    P = partition.p_block
    counts, _ = idx.corner_series(P)
    t = np.flatnonzero((idx.access >= P.lo) & (idx.access <= P.hi)) + 1
    delta = counts[t + 1] - counts[t]
    bad = t[delta > 1]
    witness = None
    if bad.size:
        s = int(bad[0])
        witness = f"t={s}: |C_t|={counts[s]} -> |C_t+1|={counts[s + 1]}"
    measured = int(delta.max()) if delta.size else 0
    return (_check("corner_growth", not bad.size, measured, 1, witness),)


def _added_per_row(idx, region: Region, key_lo: int, key_hi: int) -> np.ndarray:
    """Per-row count of points added in ``region`` by accesses with key in key_lo..key_hi."""
    sl = idx.region_slice(region)
    key = idx.ckey[sl]
    sel = ~idx.cbase[sl] & (key >= key_lo) & (key <= key_hi)
    return np.bincount(idx.cy[sl][sel], minlength=idx.n + 2)


def verify_corner_decay(trace: GreedyTrace, partition: Partition) -> tuple[LemmaCheck, ...]:
    """Accesses right of P: no additions in P keep the corner count; m additions
    remove at least m - 1 corners. The companion soft check asks that each
    added point sits on a column whose top was a corner."""
    idx = trace_index(trace)
    P = partition.p_block
    n = idx.n
    counts, misses = idx.corner_series(P)
    m = _added_per_row(idx, P, P.hi + 1, n)
    t = np.flatnonzero(idx.access > P.hi) + 1
    delta = counts[t + 1] - counts[t]
    mt = m[t]
    slack = delta + np.maximum(mt - 1, 0)
    bad = t[((mt == 0) & (delta != 0)) | ((mt > 0) & (slack > 0))]
    witness = None
    if bad.size:
        s = int(bad[0])
        witness = f"t={s}: |M^P|={m[s]}, |C_t|={counts[s]} -> |C_t+1|={counts[s + 1]}"
    measured = int(slack.max()) if slack.size else 0
    missed = int(misses[t].sum())
    miss_t = t[misses[t] > 0]
    return (
        _check("corner_decay", not bad.size, measured, 0, witness),
        _check("corner_decay_partner", missed == 0, missed, 0,
               f"t={int(miss_t[0])}: added point's partner not in C_t" if miss_t.size else None,
               hard=False),
    )


def _block_states(idx, region: Region):
    sl = idx.region_slice(region)
    hidden = (idx.cpred[sl] >= region.lo) & (idx.csucc[sl] <= region.hi)
    same = idx.cx[sl][1:] == idx.cx[sl][:-1]
    return sl, hidden, same


def _exposure_checks(idx, region: Region, tag: str):
    sl, hidden, same = _block_states(idx, region)
    key = idx.ckey[sl][1:]
    ys = idx.cy[sl][1:]
    inside = (key >= region.lo) & (key <= region.hi)
    under_hidden = same & hidden[:-1]
    exposed_now = under_hidden & ~hidden[1:]
    bad_source = exposed_now & ~inside
    bad_add = under_hidden & ~inside
    src_w = add_w = None
    if bad_source.any():
        i = int(np.flatnonzero(bad_source)[0])
        src_w = f"column {idx.cx[sl][i + 1]} exposed at t={ys[i] + 1} by key {key[i]}"
    if bad_add.any():
        i = int(np.flatnonzero(bad_add)[0])
        add_w = f"key {key[i]} added ({idx.cx[sl][i + 1]},{ys[i]}) under a hidden point"
    return (
        _check(f"exposure_source_{tag}", not bad_source.any(), bad_source.sum(), 0, src_w),
        _check(f"exposure_no_add_{tag}", not bad_add.any(), bad_add.sum(), 0, add_w),
    )


def verify_exposure_source(trace: GreedyTrace, partition: Partition) -> tuple[LemmaCheck, ...]:
    """Hidden points of a block are only ever exposed by accesses in that block,
    and no outside access adds a point under a hidden one."""
    idx = trace_index(trace)
    return (_exposure_checks(idx, partition.p_block, "P")
            + _exposure_checks(idx, partition.q_block, "Q"))


def state_changes(trace: GreedyTrace, region: Region) -> int:
    """Hidden/exposed transitions of the region's base points, arrival states excluded."""
    _, hidden, same = _block_states(trace_index(trace), region)
    return int((same & (hidden[1:] != hidden[:-1])).sum())


def verify_state_changes(trace: GreedyTrace, partition: Partition) -> tuple[LemmaCheck, ...]:
    out = []
    for tag, block in (("P", partition.p_block), ("Q", partition.q_block)):
        changes = state_changes(trace, block)
        bound = 5 * block.size
        out.append(_check(f"state_changes_{tag}", changes <= bound, changes, bound,
                          f"{changes} changes in {block.lo}..{block.hi}"))
    return tuple(out)


def verify_cross_additions(trace: GreedyTrace, partition: Partition) -> tuple[LemmaCheck, ...]:
    """Points one block's accesses add inside the other block: at most 7k each
    way, at most 5k of them non-extreme, and at most 2k when the receiving
    block has no keys beyond it on the far side."""
    idx = trace_index(trace)
    P, Q, k = partition.p_block, partition.q_block, partition.k
    q_into_p = _added_per_row(idx, P, Q.lo, Q.hi)
    p_into_q = _added_per_row(idx, Q, P.lo, P.hi)
    out = []
    for name, rows in (("q_into_p", q_into_p), ("p_into_q", p_into_q)):
        total = int(rows.sum())
        inner = int(np.maximum(rows - 2, 0).sum())
        out.append(_check(f"cross_{name}", total <= 7 * k, total, 7 * k, f"sum={total}"))
        out.append(_check(f"nonextreme_{name}", inner <= 5 * k, inner, 5 * k, f"sum={inner}"))
    if P.lo == 1:
        total = int(q_into_p.sum())
        out.append(_check("cross_prefix", total <= 2 * k, total, 2 * k, f"sum={total}"))
    if Q.hi == idx.n:
        total = int(p_into_q.sum())
        out.append(_check("cross_suffix", total <= 2 * k, total, 2 * k, f"sum={total}"))
    return tuple(out)


def global_bound(n: int) -> int:
    return 7 * n * math.ceil(math.log2(n)) if n > 1 else 0


def verify_global_bound(trace: GreedyTrace) -> LemmaCheck:
    bound = global_bound(trace.n)
    count = trace.added_count
    return _check("global_bound", count <= bound, count, bound, f"added={count}")


LEMMAS = {
    "corner_growth": verify_corner_growth,
    "corner_decay": verify_corner_decay,
    "exposure_source": verify_exposure_source,
    "state_changes": verify_state_changes,
    "cross_additions": verify_cross_additions,
}
ALL_LEMMAS = tuple(LEMMAS) + ("global_bound",)


@dataclass(frozen=True)
class LemmaReport:
    instance_hash: str
    partition: Partition
    checks: tuple

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks if c.hard)

    def failures(self, hard_only: bool = True) -> list[LemmaCheck]:
        return [c for c in self.checks if not c.holds and (c.hard or not hard_only)]

    def to_dict(self) -> dict:
        return {"instance_hash": self.instance_hash, "partition": self.partition.as_list(),
                "checks": [c.to_dict() for c in self.checks]}


def verify_partition(trace: GreedyTrace, partition: Partition, lemmas=None) -> LemmaReport:
    partition.check(trace.n)
    names = [name for name in LEMMAS if lemmas is None or name in lemmas]
    checks = []
    for name in names:
        checks.extend(LEMMAS[name](trace, partition))
    return LemmaReport(trace.instance.digest(), partition, tuple(checks))


def resolve_partitions(n: int, partitions="dyadic") -> list[Partition]:
    if partitions == "dyadic":
        return dyadic_partitions(n)
    if partitions == "all_halves":
        return half_partitions(n)
    return sorted(partitions)


@dataclass
class TraceReport:
    instance_hash: str
    n: int
    added: int
    reports: list = field(default_factory=list)
    global_check: LemmaCheck | None = None

    @property
    def holds(self) -> bool:
        ok = all(r.holds for r in self.reports)
        return ok and (self.global_check is None or self.global_check.holds)

    def failures(self, hard_only: bool = True) -> list[tuple]:
        out = [(r.partition, c) for r in self.reports for c in r.failures(hard_only)]
        if self.global_check is not None and not self.global_check.holds:
            out.append((None, self.global_check))
        return out

    def soft_failures(self) -> list[tuple]:
        return [(p, c) for p, c in self.failures(hard_only=False) if not c.hard]

    def summary(self) -> dict:
        """Per-lemma totals: partitions checked, failures, max measured/bound."""
        out = {}
        for r in self.reports:
            for c in r.checks:
                s = out.setdefault(c.lemma, {"checked": 0, "failed": 0, "max_measured": 0,
                                             "max_ratio": 0.0, "hard": c.hard})
                s["checked"] += 1
                s["failed"] += not c.holds
                s["max_measured"] = max(s["max_measured"], c.measured)
                if c.bound > 0:
                    s["max_ratio"] = max(s["max_ratio"], round(c.measured / c.bound, 6))
        return out

    def to_dict(self) -> dict:
        return {
            "instance_hash": self.instance_hash,
            "n": self.n,
            "added": self.added,
            "holds": self.holds,
            "global": None if self.global_check is None else self.global_check.to_dict(),
            "summary": self.summary(),
            "reports": [r.to_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


def verify_trace(trace: GreedyTrace, partitions="dyadic", lemmas=None) -> TraceReport:
    """Run the selected lemma checks over every partition, plus the global bound."""
    report = TraceReport(trace.instance.digest(), trace.n, trace.added_count)
    for part in resolve_partitions(trace.n, partitions):
        report.reports.append(verify_partition(trace, part, lemmas))
    if lemmas is None or "global_bound" in lemmas:
        report.global_check = verify_global_bound(trace)
    return report

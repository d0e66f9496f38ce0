import json
import random

import numpy as np
import pytest

from arboral import Instance, run
from arboral.analysis import (
    EXPOSED,
    FOR_PL,
    FOR_Q,
    HIDDEN,
    NOT_ARRIVED,
    Partition,
    Region,
    corner_points,
    corner_timeline,
    dyadic_partitions,
    exposure_timeline,
    global_bound,
    half_partitions,
    hidden_state,
    maximal_points,
    state_changes,
    trace_index,
    verify_corner_decay,
    verify_corner_growth,
    verify_cross_additions,
    verify_exposure_source,
    verify_global_bound,
    verify_partition,
    verify_state_changes,
    verify_trace,
)
from arboral.generators import GeneratorSpec, generate
from arboral.geometry import Point, PreconditionError
from arboral.greedy import GreedyTrace


# ---- brute-force oracles, written from the definitions only ----------------

def all_points(trace):
    return list(trace.instance.points) + trace.added_points()


def pareto(points, side):
    sign = 1 if side == FOR_Q else -1
    pts = set(points)
    return frozenset(
        Point(*z) for z in pts
        if not any(w != z and sign * w[0] >= sign * z[0] and w[1] >= z[1] for w in pts))


def brute_corners(trace, region, t, side=FOR_Q):
    return pareto([p for p in all_points(trace) if p[0] in region and p[1] < t], side)


def brute_hidden(trace, region, p, t):
    if t <= p[1]:
        return NOT_ARRIVED
    pts = all_points(trace)
    top = max(y for x, y in pts if x == p[0] and y < t)
    line = [x for x, y in pts if y == top and x in region]
    left = any(x < p[0] for x in line)
    right = any(x > p[0] for x in line)
    return HIDDEN if left and right else EXPOSED


def brute_states(trace, region, x):
    p = Point(x, trace.instance.time_of(x))
    return {t: brute_hidden(trace, region, p, t) for t in range(p.y + 1, trace.n + 2)}


def added_by_step(trace):
    return {s.t: (s.access, list(s.added)) for s in trace.steps}


def brute_lemmas(trace, part):
    """(holds, measured) per hard check name."""
    n = trace.n
    P, Q, k = part.p_block, part.q_block, part.k
    steps = added_by_step(trace)
    size = {t: len(brute_corners(trace, P, t)) for t in range(1, n + 2)}
    out = {}

    deltas = [size[t + 1] - size[t] for t in range(1, n + 1) if steps[t][0].x in P]
    out["corner_growth"] = (all(d <= 1 for d in deltas), max(deltas, default=0))

    ok, slack_max = True, None
    for t in range(1, n + 1):
        if steps[t][0].x <= P.hi:
            continue
        m = sum(q.x in P for q in steps[t][1])
        d = size[t + 1] - size[t]
        ok &= d == 0 if m == 0 else d <= -(m - 1)
        slack = d + max(m - 1, 0)
        slack_max = slack if slack_max is None else max(slack_max, slack)
    out["corner_decay"] = (ok, slack_max or 0)

    for tag, block in (("P", P), ("Q", Q)):
        bad_src = bad_add = changes = 0
        for x in range(block.lo, block.hi + 1):
            st = brute_states(trace, block, x)
            ts = sorted(st)
            changes += sum(st[a] != st[b] for a, b in zip(ts, ts[1:]))
            for t in ts[:-1]:
                if st[t] == HIDDEN and st[t + 1] == EXPOSED:
                    bad_src += steps[t][0].x not in block
                if st[t] == HIDDEN:
                    acc, added = steps[t]
                    bad_add += acc.x not in block and any(q.x == x for q in added)
        out[f"exposure_source_{tag}"] = (bad_src == 0, bad_src)
        out[f"exposure_no_add_{tag}"] = (bad_add == 0, bad_add)
        out[f"state_changes_{tag}"] = (changes <= 5 * block.size, changes)

    for name, src, dst in (("q_into_p", Q, P), ("p_into_q", P, Q)):
        per = [sum(q.x in dst for q in added) for acc, added in steps.values() if acc.x in src]
        out[f"cross_{name}"] = (sum(per) <= 7 * k, sum(per))
        inner = sum(max(c - 2, 0) for c in per)
        out[f"nonextreme_{name}"] = (inner <= 5 * k, inner)
    if P.lo == 1:
        v = out["cross_q_into_p"][1]
        out["cross_prefix"] = (v <= 2 * k, v)
    if Q.hi == n:
        v = out["cross_p_into_q"][1]
        out["cross_suffix"] = (v <= 2 * k, v)
    return out


# ---- regions and partitions -------------------------------------------------

def test_region_and_partition_validation():
    assert Region(2, 4).size == 3 and 3 in Region(2, 4) and (5, 1) not in Region(2, 4)
    for lo, hi in ((0, 2), (3, 2)):
        with pytest.raises(PreconditionError):
            Region(lo, hi)
    with pytest.raises(PreconditionError):
        Region(1, 7).check(6)
    with pytest.raises(PreconditionError):
        Partition(Region(1, 2), Region(4, 5))
    with pytest.raises(PreconditionError):
        Partition(Region(1, 1), Region(2, 3))
    with pytest.raises(PreconditionError):
        Partition(Region(1, 3), Region(4, 4))
    assert Partition.at(2, 3).as_list() == [2, 4, 5, 7]
    with pytest.raises(PreconditionError):
        Partition.at(2, 3).check(6)


def test_dyadic_partitions():
    assert [p.as_list() for p in dyadic_partitions(6)] == [
        [1, 1, 2, 2], [1, 2, 3, 3], [1, 3, 4, 6], [4, 4, 5, 5], [4, 5, 6, 6]]
    assert dyadic_partitions(1) == []
    assert len(dyadic_partitions(256)) == 255
    for part in dyadic_partitions(37):
        part.check(37)


def test_half_partitions():
    assert len(half_partitions(6)) == 5 + 3 + 1
    assert all(p.k == 2 for p in half_partitions(8, ks=[2]))
    assert len(half_partitions(8, ks=[2])) == 5


# ---- corner points ----------------------------------------------------------

def test_figure2_staircase():
    pts = [(5, 1), (4, 2), (2, 3), (1, 4), (5, 2), (4, 3), (2, 4)]
    assert maximal_points(pts, FOR_Q) == {(5, 2), (4, 3), (2, 4)}
    assert maximal_points(pts, FOR_Q) == pareto(pts, FOR_Q)
    assert maximal_points(pts, FOR_PL) == pareto(pts, FOR_PL)


def test_maximal_points_random_against_pareto():
    rng = random.Random(1)
    for _ in range(500):
        pts = {(rng.randint(1, 8), rng.randint(1, 8)) for _ in range(rng.randint(0, 12))}
        for side in (FOR_Q, FOR_PL):
            assert maximal_points(pts, side) == pareto(pts, side)


def test_corner_points_examples(fig1_trace):
    assert corner_points(fig1_trace, Region(1, 3), 1).corners == frozenset()
    snap = corner_points(fig1_trace, Region(1, 3), 6)
    assert snap.corners == brute_corners(fig1_trace, Region(1, 3), 6)
    assert snap.corners == {(3, 5)}
    with pytest.raises(PreconditionError):
        corner_points(fig1_trace, Region(1, 3), 8)
    with pytest.raises(PreconditionError):
        corner_points(fig1_trace, Region(1, 3), 3, side="sideways")


@pytest.mark.parametrize("seed", range(6))
def test_corner_points_against_pareto(seed):
    trace = run(generate(GeneratorSpec("random", 14, seed)))
    rng = random.Random(seed)
    for _ in range(12):
        lo = rng.randint(1, 14)
        region = Region(lo, rng.randint(lo, 14))
        for t in range(1, 16):
            for side in (FOR_Q, FOR_PL):
                assert corner_points(trace, region, t, side).corners == \
                    brute_corners(trace, region, t, side)


def test_incremental_timeline_matches_recomputation():
    for seed in range(100):
        trace = run(generate(GeneratorSpec("random", 64, seed)))
        for part in dyadic_partitions(64)[:: 9]:
            region = part.p_block
            timeline = corner_timeline(trace, region)
            counts, _ = trace_index(trace).corner_series(region)
            for t in range(1, 66):
                snap = corner_points(trace, region, t).corners
                assert timeline[t - 1] == snap
                assert counts[t] == len(snap)


# ---- hidden / exposed -------------------------------------------------------

def test_figure3_configuration():
    # base p = (2, 4) sits under the line y = 4 flanked by (1, 4) and (3, 4);
    # q = (3, 2) has top (3, 4), with nothing to its right on that line
    trace = run(Instance((4, 3, 1, 2)))
    assert sorted(trace.added_points()) == [(1, 4), (3, 3), (3, 4), (4, 2)]
    region = Region(1, 4)
    assert hidden_state(trace, region, (2, 4), 5) == HIDDEN
    assert hidden_state(trace, region, (3, 2), 5) == EXPOSED
    assert hidden_state(trace, region, (2, 4), 4) == NOT_ARRIVED


def test_fresh_point_without_neighbours_is_exposed():
    trace = run(Instance((1, 2, 3)))
    assert hidden_state(trace, Region(1, 3), (1, 1), 2) == EXPOSED


def test_hidden_state_preconditions(fig1_trace):
    with pytest.raises(PreconditionError):
        hidden_state(fig1_trace, Region(1, 3), (4, 4), 5)
    with pytest.raises(PreconditionError):
        hidden_state(fig1_trace, Region(1, 6), (4, 3), 5)


def test_figure1_final_states_against_line_scan(fig1, fig1_trace):
    region = Region(1, 6)
    for p in fig1.points:
        assert hidden_state(fig1_trace, region, p, 7) == brute_hidden(fig1_trace, region, p, 7)


@pytest.mark.parametrize("seed", range(8))
def test_hidden_state_against_line_scan(seed):
    trace = run(generate(GeneratorSpec("random", 16, seed)))
    rng = random.Random(seed)
    for _ in range(10):
        lo = rng.randint(1, 16)
        region = Region(lo, rng.randint(lo, 16))
        for x in range(region.lo, region.hi + 1):
            p = Point(x, trace.instance.time_of(x))
            for t in range(1, 18):
                assert hidden_state(trace, region, p, t) == brute_hidden(trace, region, p, t)


def _compress(states):
    events = []
    for t in sorted(states):
        if not events or events[-1][1] != states[t]:
            events.append((t, states[t]))
    return tuple(events)


def test_exposure_timeline_examples(fig1_trace):
    (only,) = exposure_timeline(run(Instance((1,))), Region(1, 1))
    assert only.changes == 0 and only.events == ((2, EXPOSED),)
    seq = run(generate(GeneratorSpec("sequential", 10)))
    for tl in exposure_timeline(seq, Region(1, 5)):
        assert tl.events[0] == (tl.base_point.y + 1, EXPOSED)
    region = Region(1, 3)
    for tl in exposure_timeline(fig1_trace, region):
        states = {t: hidden_state(fig1_trace, region, tl.base_point, t)
                  for t in range(tl.base_point.y + 1, 8)}
        assert tl.events == _compress(states)


@pytest.mark.parametrize("seed", range(10))
def test_exposure_timeline_against_line_scan(seed):
    trace = run(generate(GeneratorSpec("random", 20, seed)))
    for part in half_partitions(20, ks=[1, 3, 5, 10])[:: 3]:
        for region in (part.p_block, part.q_block):
            tls = exposure_timeline(trace, region)
            for tl in tls:
                assert tl.events == _compress(brute_states(trace, region, tl.base_point.x))
                states = [s for _, s in tl.events]
                assert all(a != b for a, b in zip(states, states[1:]))
            assert state_changes(trace, region) == sum(tl.changes for tl in tls)


# ---- verifiers --------------------------------------------------------------

def _as_map(checks):
    return {c.lemma: (c.holds, c.measured) for c in checks}


@pytest.mark.parametrize("n", [2, 3, 6, 9, 12])
def test_verifiers_against_brute_force(n):
    for seed in range(12):
        trace = run(generate(GeneratorSpec("random", n, seed)))
        for part in half_partitions(n):
            report = verify_partition(trace, part)
            got = {k: v for k, v in _as_map(report.checks).items() if k != "corner_decay_partner"}
            assert got == brute_lemmas(trace, part)


def test_figure1_verifier_examples(fig1_trace):
    part = Partition(Region(1, 3), Region(4, 6))
    growth = _as_map(verify_corner_growth(fig1_trace, part))
    assert growth["corner_growth"][0]
    decay = verify_corner_decay(fig1_trace, part)
    assert decay[0].holds and decay[0].lemma == "corner_decay"
    # the only Q-side access that adds inside P is t = 4 (key 4), adding (2, 4)
    steps = added_by_step(fig1_trace)
    assert [q for q in steps[4][1] if q.x <= 3] == [(2, 4)]
    cross = _as_map(verify_cross_additions(fig1_trace, part))
    assert cross["cross_q_into_p"] == (True, 1)
    assert cross["cross_prefix"] == (True, 1)
    assert cross["cross_p_into_q"] == (True, 3)
    for c in verify_state_changes(fig1_trace, part):
        assert c.holds and c.bound == 15
    for c in verify_exposure_source(fig1_trace, part):
        assert c.holds


def test_two_key_partition():
    for access in ((1, 2), (2, 1)):
        trace = run(Instance(access))
        checks = verify_partition(trace, Partition(Region(1, 1), Region(2, 2))).checks
        cross = _as_map(checks)
        assert cross["cross_q_into_p"][1] <= 2 and cross["cross_p_into_q"][1] <= 2
        assert all(c.holds for c in checks)


def test_state_change_bound_for_single_key():
    trace = run(generate(GeneratorSpec("random", 30, 3)))
    for c in verify_state_changes(trace, Partition.at(7, 1)):
        assert c.bound == 5 and c.holds


def test_global_bound():
    assert global_bound(1) == 0 and global_bound(6) == 126
    check = verify_global_bound(run(Instance((6, 1, 2, 4, 3, 5))))
    assert (check.holds, check.measured, check.bound) == (True, 9, 126)
    assert verify_global_bound(run(Instance((1,)))).holds


def test_exposure_vacuous_for_single_key():
    report = verify_trace(run(Instance((1,))))
    assert report.reports == [] and report.holds


def test_exposure_source_all_halves_figure1(fig1_trace):
    for part in half_partitions(6):
        assert all(c.holds for c in verify_exposure_source(fig1_trace, part))


def test_fake_trace_failure_carries_witness():
    # access 1,2,3,4 but pretend the access at t=4 added (1,4) and (2,4)
    fake = GreedyTrace(Instance((1, 2, 3, 4)), np.array([1, 2]), np.array([0, 0, 0, 0, 2]))
    report = verify_partition(fake, Partition.at(1, 2))
    failed = {c.lemma: c for c in report.failures(hard_only=False)}
    assert "corner_decay" in failed and "corner_decay_partner" in failed
    assert failed["corner_decay"].witness.startswith("t=4")
    assert not report.holds
    d = report.to_dict()
    assert d["partition"] == [1, 2, 3, 4] and d["instance_hash"] == fake.instance.digest()
    row = next(c for c in d["checks"] if c["lemma"] == "corner_decay")
    assert {"lemma", "holds", "measured", "bound", "witness"} <= set(row) and row["holds"] is False


def test_trace_report_json(fig1_trace):
    rep = verify_trace(fig1_trace)
    payload = json.loads(rep.to_json())
    assert payload["holds"] and payload["added"] == 9
    assert len(payload["reports"]) == 5
    assert payload["global"] == {"lemma": "global_bound", "holds": True, "measured": 9,
                                 "bound": 126, "hard": True}
    for r in payload["reports"]:
        assert set(r) == {"instance_hash", "partition", "checks"}
        for c in r["checks"]:
            assert {"lemma", "holds", "measured", "bound"} <= set(c)
    only = verify_trace(fig1_trace, lemmas=["corner_growth"])
    assert {c.lemma for r in only.reports for c in r.checks} == {"corner_growth"}
    assert only.global_check is None


# ---- random suites ----------------------------------------------------------

def test_corner_lemmas_random_n64():
    for seed in range(100):
        trace = run(generate(GeneratorSpec("random", 64, seed)))
        rep = verify_trace(trace, lemmas=["corner_growth", "corner_decay"])
        assert rep.failures() == []


def test_exposure_random_n128():
    rng = random.Random(0)
    for seed in range(100):
        trace = run(generate(GeneratorSpec("random", 128, seed)))
        parts = dyadic_partitions(128) + rng.sample(half_partitions(128), 20)
        rep = verify_trace(trace, partitions=parts, lemmas=["exposure_source"])
        assert rep.failures() == []


def test_state_changes_random_n256():
    worst = 0.0
    for seed in range(100):
        trace = run(generate(GeneratorSpec("random", 256, seed)))
        rep = verify_trace(trace, lemmas=["state_changes"])
        assert rep.failures() == []
        worst = max(worst, rep.summary()["state_changes_P"]["max_ratio"])
    assert 0 < worst <= 1


def test_cross_additions_random_n256():
    ks = [1, 2, 4, 8, 16, 32, 64, 128]
    parts = half_partitions(256, ks=ks)
    for seed in range(100):
        trace = run(generate(GeneratorSpec("random", 256, seed)))
        rep = verify_trace(trace, partitions=parts, lemmas=["cross_additions"])
        assert rep.failures() == []

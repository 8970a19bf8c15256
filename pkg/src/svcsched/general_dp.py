"""Exact dynamic program over cut states for arbitrary task graphs, plus its
epsilon-rounding, the budget-mode halving search, and the Pareto-front
approximation.

A state of a running schedule keeps the timestamp, how long the server has
been idle, and for every open edge (tail processed, head not) the tail's
location and the time since it finished.  We store ages as absolute
completion times, which keeps states stable while the timestamp advances; a
(state, job, location) transition then becomes feasible at a fixed threshold
time, so the per-timestep sweep can be driven by an event queue.  States
identical up to larger ages and cheaper value dominate; culling them leaves
the reachable value set unchanged.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chain_parallel import (EXACT, Guarantee, SolveOutcome,
                             outcome_from_schedule, scale_deadline,
                             scale_graph, to_fraction)
from .model import (CLOUD, INF, Schedule, SERVER, StateSpaceExceeded,
                    TaskGraph, all_server_schedule, validate_schedule,
                    zero_makespan_schedule)
from .oracle import ParetoPoint

STATE_CAP_ENV = "SVC_SCHED_STATE_CAP"
DEFAULT_STATE_CAP = 500_000


def read_state_cap() -> int:
    raw = os.environ.get(STATE_CAP_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_STATE_CAP


@dataclass(frozen=True)
class DPState:
    """Readable view of a cut state: timestamp, server idle age, and per open
    edge the tail's location and idle age."""
    t: int
    server_idle_age: int
    open_edges: tuple  # ((tail, head), tail_loc, tail_age) sorted
    value: float


@dataclass(frozen=True)
class ScaledInstance:
    original: TaskGraph
    rho: Fraction
    graph: TaskGraph
    deadline: int

    @classmethod
    def build(cls, g: TaskGraph, deadline: int, epsilon, denom: int = 2) -> "ScaledInstance":
        n = len(g.jobs)
        rho = max(Fraction(1), to_fraction(epsilon) * deadline / (denom * n))
        return cls(original=g, rho=rho, graph=scale_graph(g, rho),
                   deadline=scale_deadline(deadline, rho))


class _Expansion:
    def __init__(self):
        self.completes = []  # (t, value, backptr)
        self.peak_states = 0
        self.created = 0
        self.max_open = 0


def _expand(g: TaskGraph, deadline_cap: int, budget=INF, cost_of=None,
            state_cap: Optional[int] = None) -> _Expansion:
    """Enumerate reachable cut states up to ``deadline_cap``.

    Returns every reachable completed state as (finish time, cost, backptr);
    backptr chains are (job, loc, completion, parent) links.
    """
    if cost_of is None:
        cost_of = g.p_cloud
    if state_cap is None:
        state_cap = read_state_cap()

    in_edges = {j: frozenset((k, j) for k in g.preds[j]) for j in g.jobs}
    out_edges = {j: frozenset((j, k) for k in g.succs[j]) for j in g.jobs}

    res = _Expansion()
    start_bp = (g.source, SERVER, 0, None)
    start_key = (0, out_edges[g.source],
                 ((g.source, SERVER, 0),))
    states = {start_key: (0, start_bp)}
    groups = {}
    counter = 0
    heap = [(0, 0, 0, start_key)]

    def group_of(key):
        busy, open_set, tails = key
        return (open_set, tuple((j, l) for j, l, _ in tails))

    def vector_of(key):
        busy, open_set, tails = key
        return (busy,) + tuple(c for _, _, c in tails)

    g0 = group_of(start_key)
    groups[g0] = [(vector_of(start_key), start_key)]

    while heap:
        t_ev, val_ev, _, key = heapq.heappop(heap)
        entry = states.get(key)
        if entry is None or entry[0] != val_ev:
            continue
        value, bp = entry
        busy, open_set, tails = key
        if len(open_set) > res.max_open:
            res.max_open = len(open_set)
        birth = max([busy] + [c for _, _, c in tails]) if tails else busy
        tail_info = {j: (l, c) for j, l, c in tails}
        heads = {v for _, v in open_set}
        for j in sorted(heads, key=g.job_index.__getitem__):
            if not in_edges[j] <= open_set:
                continue
            for loc in (SERVER, CLOUD):
                p = g.p_server[j] if loc == SERVER else g.p_cloud[j]
                if p == INF:
                    continue
                p = int(p)
                tstar = birth
                if loc == SERVER:
                    tstar = max(tstar, busy + p)
                add_cost = 0 if loc == SERVER else int(cost_of[j])
                ok = True
                for k in g.preds[j]:
                    kl, kc = tail_info[k]
                    wait = p
                    if kl != loc:
                        wait += g.delay[(k, j)]
                    if kc + wait > tstar:
                        tstar = kc + wait
                if tstar > deadline_cap:
                    continue
                nvalue = value + add_cost
                if nvalue > budget:
                    continue
                nopen = (open_set - in_edges[j]) | out_edges[j]
                nbp = (j, loc, tstar, bp)
                if not nopen:
                    res.completes.append((tstar, nvalue, nbp))
                    continue
                tail_jobs = {u for u, _ in nopen}
                ntails = tuple(sorted(
                    [(x, l, c) for x, l, c in tails if x in tail_jobs]
                    + ([(j, loc, tstar)] if j in tail_jobs else [])))
                nbusy = tstar if (loc == SERVER and p > 0) else busy
                nkey = (nbusy, nopen, ntails)
                cur = states.get(nkey)
                if cur is not None and cur[0] <= nvalue:
                    continue
                grp = group_of(nkey)
                vec = vector_of(nkey)
                bucket = groups.setdefault(grp, [])
                dominated = False
                for ovec, okey in bucket:
                    if okey == nkey:
                        continue
                    oentry = states.get(okey)
                    if oentry is None:
                        continue
                    if oentry[0] <= nvalue and all(a <= b for a, b in zip(ovec, vec)):
                        dominated = True
                        break
                if dominated:
                    continue
                keep = []
                for ovec, okey in bucket:
                    oentry = states.get(okey)
                    if oentry is None or okey == nkey:
                        continue
                    if nvalue <= oentry[0] and all(a <= b for a, b in zip(vec, ovec)):
                        del states[okey]
                        continue
                    keep.append((ovec, okey))
                keep.append((vec, nkey))
                groups[grp] = keep
                states[nkey] = (nvalue, nbp)
                res.created += 1
                if res.created > state_cap:
                    raise StateSpaceExceeded(
                        "cut-state DP exceeded %d states (open-edge width seen: %d); "
                        "raise %s to override" % (state_cap, res.max_open, STATE_CAP_ENV))
                if len(states) > res.peak_states:
                    res.peak_states = len(states)
                counter += 1
                heapq.heappush(heap, (tstar, nvalue, counter, nkey))
    return res


def _schedule_from_bp(bp) -> Schedule:
    location = {}
    completion = {}
    node = bp
    while node is not None:
        job, loc, t, node = node
        location[job] = loc
        completion[job] = int(t)
    return Schedule(location=location, completion=completion)


def dyn_prog(g: TaskGraph, deadline: int,
             state_cap: Optional[int] = None) -> Optional[tuple]:
    """Exact minimum cost over schedules with makespan <= deadline, or None.

    The returned schedule's completion times are the DP's own timestamps.
    """
    cap = min(deadline, g.work_bound())
    res = _expand(g, cap, state_cap=state_cap)
    cands = [(v, t, bp) for t, v, bp in res.completes if t <= deadline]
    if not cands:
        return None
    v, t, bp = min(cands, key=lambda c: (c[0], c[1]))
    return int(v), _schedule_from_bp(bp)


def dyn_prog_stats(g: TaskGraph, deadline: int,
                   state_cap: Optional[int] = None) -> _Expansion:
    """Run the expansion and expose state-count statistics (for diagnostics)."""
    return _expand(g, min(deadline, g.work_bound()), state_cap=state_cap)


# ---------------------------------------------------------------------------
# unscaling

def replay_block_shift(g: TaskGraph, location, planned_start) -> Schedule:
    """Start every job at its planned time; whenever some job cannot start,
    push it and every later job back by the mandatory delay and rescan."""
    seq = sorted(g.jobs, key=lambda j: (planned_start[j], g.job_index[j]))
    start = {j: int(planned_start[j]) for j in g.jobs}
    proc = {j: int(g.p_server[j] if location[j] == SERVER else g.p_cloud[j]) for j in g.jobs}
    for _ in range(len(seq) * len(seq) + 4):
        comp = {}
        server_free = 0
        shift_from = None
        delta = 0
        for pos, j in enumerate(seq):
            need = 0
            for k in g.preds[j]:
                lag = g.delay[(k, j)] if location[k] != location[j] else 0
                need = max(need, comp[k] + lag)
            if location[j] == SERVER and proc[j] > 0:
                need = max(need, server_free)
            if start[j] < need:
                shift_from = pos
                delta = need - start[j]
                break
            comp[j] = start[j] + proc[j]
            if location[j] == SERVER and proc[j] > 0:
                server_free = comp[j]
        if shift_from is None:
            return Schedule(location=dict(location), completion=comp)
        for j in seq[shift_from:]:
            start[j] += delta
    raise AssertionError("block-shift repair did not converge")


def _unscale_witness(g: TaskGraph, sched_scaled: Schedule, scaled_g: TaskGraph,
                     rho: Fraction) -> Schedule:
    planned = {}
    for j in g.jobs:
        p_hat = scaled_g.p_server[j] if sched_scaled.location[j] == SERVER else scaled_g.p_cloud[j]
        s_hat = sched_scaled.completion[j] - int(p_hat)
        planned[j] = int(Fraction(s_hat) * rho)  # floor
    return replay_block_shift(g, sched_scaled.location, planned)


def rounded_min_cost(g: TaskGraph, deadline: int, epsilon,
                     state_cap: Optional[int] = None) -> Optional[SolveOutcome]:
    """Cost <= OPT(deadline) with makespan <= (1 + eps) * deadline."""
    zero = zero_makespan_schedule(g)
    if zero is not None:
        return outcome_from_schedule(g, zero, EXACT)
    si = ScaledInstance.build(g, deadline, epsilon, denom=2)
    cap = min(si.deadline, si.graph.work_bound())
    res = _expand(si.graph, cap, cost_of=g.p_cloud, state_cap=state_cap)
    cands = [(v, t, bp) for t, v, bp in res.completes if t <= si.deadline]
    if not cands:
        return None
    v, t, bp = min(cands, key=lambda c: (c[0], c[1]))
    scaled_sched = _schedule_from_bp(bp)
    sched = _unscale_witness(g, scaled_sched, si.graph, si.rho)
    guarantee = EXACT if si.rho == 1 else Guarantee(
        "cost_opt_makespan_within", augmentation=float(1 + to_fraction(epsilon)))
    return outcome_from_schedule(g, sched, guarantee)


def fptas_min_makespan(g: TaskGraph, budget: int, epsilon,
                       state_cap: Optional[int] = None) -> Optional[SolveOutcome]:
    """Cost <= budget and makespan <= (1 + eps) * OPT(budget).

    Halving search: start from the all-server horizon, keep halving the
    deadline estimate and the scale together (the scaled deadline stays put),
    return the result of the last feasible round.
    """
    zero = zero_makespan_schedule(g)
    if zero is not None:
        return outcome_from_schedule(g, zero, EXACT)
    allsrv = all_server_schedule(g)
    if allsrv is not None and allsrv.completion[g.sink] == 0:
        return outcome_from_schedule(g, allsrv, EXACT)
    d0 = allsrv.completion[g.sink] if allsrv is not None else g.work_bound()
    n = len(g.jobs)
    eps = to_fraction(epsilon)
    rho0 = eps * d0 / (4 * n)
    prev = None
    i = 0
    while True:
        d_i = -(-d0 // (2 ** i))
        rho_i = max(Fraction(1), rho0 / (2 ** i))
        sg = scale_graph(g, rho_i)
        d_hat = scale_deadline(d_i, rho_i)
        cap = min(d_hat, sg.work_bound())
        res = _expand(sg, cap, budget=budget, cost_of=g.p_cloud, state_cap=state_cap)
        cands = [(t, v, bp) for t, v, bp in res.completes if t <= d_hat]
        if not cands:
            break
        t, v, bp = min(cands, key=lambda c: (c[0], c[1]))
        sched = _unscale_witness(g, _schedule_from_bp(bp), sg, rho_i)
        prev = outcome_from_schedule(
            g, sched, Guarantee("makespan_within", augmentation=float(1 + eps)))
        if d_i == 1:
            break
        i += 1
    return prev


def approx_pareto(g: TaskGraph, alpha, state_cap: Optional[int] = None) -> list:
    """Set of points alpha-dominating the Pareto front, with verified witnesses.

    Runs the rounded DP with eps = alpha / 2 over geometrically shrinking
    horizons, reports every completed state's repaired witness, and filters
    dominated points at the end.
    """
    zero = zero_makespan_schedule(g)
    if zero is not None:
        return [ParetoPoint(0, 0, zero)]
    allsrv = all_server_schedule(g)
    d0 = allsrv.completion[g.sink] if allsrv is not None else g.work_bound()
    if d0 == 0:
        raise AssertionError("zero horizon without a zero-makespan schedule")
    eps = to_fraction(alpha) / 2
    n = len(g.jobs)
    seen = {}
    d = d0
    while True:
        rho = max(Fraction(1), eps * d / (2 * n))
        sg = scale_graph(g, rho)
        d_hat = scale_deadline(d, rho)
        cap = min(d_hat, sg.work_bound())
        res = _expand(sg, cap, cost_of=g.p_cloud, state_cap=state_cap)
        front = {}
        for t, v, bp in res.completes:
            if t <= d_hat and (t not in front or v < front[t][0]):
                front[t] = (v, bp)
        for t, (v, bp) in sorted(front.items()):
            sched = _unscale_witness(g, _schedule_from_bp(bp), sg, rho)
            report = validate_schedule(g, sched)
            bound = (t + 2 * n - 4) * rho
            assert report.valid and report.makespan <= bound, \
                "repaired witness exceeds its reported bound"
            point = (report.makespan, int(report.cost))
            if point not in seen:
                seen[point] = sched
        if d == 1:
            break
        d = -(-d // 2)
    points = sorted(seen)
    kept = []
    for mk, cost in points:
        if not any(m2 <= mk and c2 <= cost and (m2, c2) != (mk, cost) for m2, c2 in points):
            kept.append(ParetoPoint(mk, cost, seen[(mk, cost)]))
    kept.sort(key=lambda p: p.makespan)
    return kept

"""Exhaustive exact solver for tiny instances; ground truth in all tests.

For every server/cloud partition of the middle jobs the optimal timing is
found by trying every linear extension of the precedence order restricted to
the server jobs: for a fixed partition and server sequence all validity
constraints are lower bounds C(v) >= C(u) + w, so earliest completions are
longest paths and the best sequence gives the partition's minimum makespan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (CLOUD, INF, InstanceTooLarge, Schedule, TaskGraph, SERVER,
                    asap_schedule)

DEFAULT_JOB_CAP = 10

_TABLE_CACHE: dict = {}


@dataclass(frozen=True)
class ParetoPoint:
    makespan: int
    cost: int
    witness: Schedule


def _reach_closure(g: TaskGraph) -> dict:
    """reach[u] = set of nodes reachable from u (excluding u)."""
    reach = {j: set() for j in g.jobs}
    for u in reversed(g.topo_order):
        for v in g.succs[u]:
            reach[u].add(v)
            reach[u] |= reach[v]
    return reach


def _linear_extensions(members, reach):
    """Yield every linear extension of the reachability order on ``members``."""
    members = list(members)
    remaining = set(members)
    prefix = []

    def rec():
        if not remaining:
            yield tuple(prefix)
            return
        for j in members:
            if j in remaining and not any(j in reach[k] and k in remaining for k in members if k != j):
                # j is minimal among remaining
                remaining.remove(j)
                prefix.append(j)
                yield from rec()
                prefix.pop()
                remaining.add(j)

    yield from rec()


def _partition_table(g: TaskGraph, job_cap: int) -> list:
    """Per cloud-bitmask: (cost, best makespan, best server order) or None."""
    if len(g.jobs) > job_cap:
        raise InstanceTooLarge("instance has %d jobs, oracle cap is %d" % (len(g.jobs), job_cap))
    key = (g.canonical_key(), )
    cached = _TABLE_CACHE.get(key)
    if cached is not None:
        return cached

    middles = g.middle_jobs
    reach = _reach_closure(g)
    table = []
    for mask in range(1 << len(middles)):
        loc = {g.source: SERVER, g.sink: SERVER}
        cost = 0
        ok = True
        for i, j in enumerate(middles):
            if mask >> i & 1:
                loc[j] = CLOUD
                if g.p_cloud[j] == INF:
                    ok = False
                    break
                cost += g.p_cloud[j]
            else:
                loc[j] = SERVER
                if g.p_server[j] == INF:
                    ok = False
                    break
        if not ok:
            table.append(None)
            continue
        server_jobs = [j for j in g.jobs if loc[j] == SERVER and j not in (g.source, g.sink)]
        best = None
        for perm in _linear_extensions(server_jobs, reach):
            order = (g.source,) + perm + (g.sink,)
            sched = asap_schedule(g, loc, order)
            mk = sched.completion[g.sink]
            if best is None or mk < best[0]:
                best = (mk, order)
        table.append((int(cost), int(best[0]), best[1]))
    _TABLE_CACHE[key] = table
    return table


def _schedule_for_mask(g: TaskGraph, mask: int, order) -> Schedule:
    loc = {g.source: SERVER, g.sink: SERVER}
    for i, j in enumerate(g.middle_jobs):
        loc[j] = CLOUD if mask >> i & 1 else SERVER
    return asap_schedule(g, loc, order)


def oracle_decide(g: TaskGraph, deadline: int, budget: int,
                  job_cap: int = DEFAULT_JOB_CAP):
    """A valid schedule with makespan <= deadline and cost <= budget, or None.

    Deterministic: minimizes (makespan, cost, cloud bitmask).
    """
    table = _partition_table(g, job_cap)
    best = None
    for mask, entry in enumerate(table):
        if entry is None:
            continue
        cost, mk, order = entry
        if cost <= budget and mk <= deadline:
            key = (mk, cost, mask)
            if best is None or key < best[0]:
                best = (key, order)
    if best is None:
        return None
    (mk, cost, mask), order = best
    return _schedule_for_mask(g, mask, order)


def oracle_min_cost(g: TaskGraph, deadline: int, job_cap: int = DEFAULT_JOB_CAP):
    """(cost, schedule) minimizing cost subject to makespan <= deadline, or None."""
    table = _partition_table(g, job_cap)
    best = None
    for mask, entry in enumerate(table):
        if entry is None:
            continue
        cost, mk, order = entry
        if mk <= deadline:
            key = (cost, mk, mask)
            if best is None or key < best[0]:
                best = (key, order)
    if best is None:
        return None
    (cost, mk, mask), order = best
    return cost, _schedule_for_mask(g, mask, order)


def oracle_min_makespan(g: TaskGraph, budget: int, job_cap: int = DEFAULT_JOB_CAP):
    """(makespan, schedule) minimizing makespan subject to cost <= budget, or None."""
    table = _partition_table(g, job_cap)
    best = None
    for mask, entry in enumerate(table):
        if entry is None:
            continue
        cost, mk, order = entry
        if cost <= budget:
            key = (mk, cost, mask)
            if best is None or key < best[0]:
                best = (key, order)
    if best is None:
        return None
    (mk, cost, mask), order = best
    return mk, _schedule_for_mask(g, mask, order)


def oracle_pareto(g: TaskGraph, job_cap: int = DEFAULT_JOB_CAP) -> list:
    """Exact Pareto front: sweep the achievable budgets, keep non-dominated points."""
    table = _partition_table(g, job_cap)
    budgets = sorted({entry[0] for entry in table if entry is not None})
    raw = []
    for b in budgets:
        cands = [(entry[1], entry[0], mask, entry[2])
                 for mask, entry in enumerate(table)
                 if entry is not None and entry[0] <= b]
        if cands:
            raw.append(min(cands))
    front = []
    for mk, cost, mask, order in sorted(set(raw)):
        dominated = any(mk2 <= mk and c2 <= cost and (mk2, c2) != (mk, cost)
                        for mk2, c2, _, _ in raw)
        if not dominated and (mk, cost) not in [(p.makespan, p.cost) for p in front]:
            front.append(ParetoPoint(mk, cost, _schedule_for_mask(g, mask, order)))
    front.sort(key=lambda p: p.makespan)
    return front

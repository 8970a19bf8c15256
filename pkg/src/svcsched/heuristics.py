"""Fast special-case algorithms.

* unit-size/unit-delay instances: cost approximation with a (1 + eps)
  deadline augmentation, built from an all-cloud schedule by pulling boundary
  jobs onto the server,
* no communication delays with identical machines: longest chain on the
  server plus greedy budget repair (factor 2 on the makespan),
* no delays with unit sizes: the same procedures are exact in both modes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .chain_parallel import (EXACT, Guarantee, MIN_COST, MIN_MAKESPAN,
                             SolveOutcome, outcome_from_schedule, to_fraction)
from .model import (CLOUD, INF, Schedule, SERVER, ShapeMismatch, TaskGraph,
                    asap_schedule, longest_chain)


def _is_unit_instance(g: TaskGraph) -> bool:
    if any(g.p_server[j] != 1 or g.p_cloud[j] != 1 for j in g.middle_jobs):
        return False
    return all(c == 1 for _, _, c in g.edges)


def _is_nodelay_identical(g: TaskGraph) -> bool:
    if any(c != 0 for _, _, c in g.edges):
        return False
    return all(g.p_server[j] == g.p_cloud[j] and g.p_server[j] != INF
               for j in g.middle_jobs)


def _depths(g: TaskGraph) -> dict:
    """Longest path from the source counted in middle jobs, inclusive."""
    depth = {}
    for j in g.topo_order:
        base = max((depth[p] for p in g.preds[j]), default=0)
        depth[j] = base + (1 if j not in (g.source, g.sink) else 0)
    return depth


def _guarantee_unit(eps: Fraction) -> Guarantee:
    return Guarantee("factor", factor=float((1 + eps) / (2 * eps)),
                     augmentation=float(1 + eps))


def unit_schedule(g: TaskGraph, deadline: int, epsilon) -> Optional[SolveOutcome]:
    """Unit sizes and delays: cost approximation with makespan <= (1+eps)*deadline.

    A chain of length deadline or deadline - 1 is forced onto the server;
    otherwise start from the all-cloud schedule and pull boundary jobs onto
    the server from both ends, keeping the cheaper variant.
    """
    if not _is_unit_instance(g):
        raise ShapeMismatch("unit_schedule needs unit processing times and delays")
    eps = to_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    path, chain_len = longest_chain(g)
    if chain_len > deadline:
        return None
    middles = list(g.middle_jobs)
    n_mid = len(middles)
    horizon = int((1 + eps) * deadline)

    if n_mid == 0:
        loc = {g.source: SERVER, g.sink: SERVER}
        return outcome_from_schedule(g, asap_schedule(g, loc, [g.source, g.sink]), EXACT)

    if n_mid <= horizon:
        loc = {j: SERVER for j in g.jobs}
        order = list(g.topo_order)
        return outcome_from_schedule(g, asap_schedule(g, loc, order), _guarantee_unit(eps))

    if chain_len >= deadline - 1:
        return _forced_chain_schedule(g, deadline, path)

    return _pull_schedule(g, deadline, horizon, eps)


def _try(g, loc, order, deadline):
    try:
        sched = asap_schedule(g, loc, order)
    except ValueError:
        return None
    return sched if sched.completion[g.sink] <= deadline else None


def _forced_chain_schedule(g: TaskGraph, deadline: int, path) -> Optional[SolveOutcome]:
    """Chain of length d or d-1: the chain must run on the server; with one
    slack slot try to fit a single extra job, everything is exact."""
    chain_mids = [j for j in path if j not in (g.source, g.sink)]
    others = [j for j in g.middle_jobs if j not in chain_mids]
    loc = {j: (SERVER if j in chain_mids or j in (g.source, g.sink) else CLOUD)
           for j in g.jobs}
    base_order = [g.source] + chain_mids + [g.sink]
    base = _try(g, loc, base_order, deadline)
    if len(chain_mids) == deadline - 1:
        for x in others:
            loc2 = dict(loc)
            loc2[x] = SERVER
            for pos in range(len(chain_mids) + 1):
                order = [g.source] + chain_mids[:pos] + [x] + chain_mids[pos:] + [g.sink]
                cand = _try(g, loc2, order, deadline)
                if cand is not None:
                    return outcome_from_schedule(g, cand, EXACT)
    if base is None:
        return None
    return outcome_from_schedule(g, base, EXACT)


def _pull_schedule(g: TaskGraph, deadline: int, horizon: int, eps: Fraction) -> SolveOutcome:
    depth = _depths(g)
    middles = list(g.middle_jobs)
    succ_count = {j: len(g.succs[j]) for j in g.jobs}

    def pick(cands):
        return min(cands, key=lambda j: (succ_count[j], g.job_index[j]))

    # variant A: cloud schedule at the front, fill the first communication
    # slot, then pull last-finishing jobs to the tail of the server timeline
    cloudC = {j: depth[j] + 1 for j in middles}
    front_cands = [j for j in middles if all(p == g.source for p in g.preds[j])]
    front = min(front_cands, key=g.job_index.__getitem__)
    moved_a = {front: 1}
    cloud_a = set(middles) - {front}
    slot = horizon
    while cloud_a and slot >= 2:
        peak = max(cloudC[j] for j in cloud_a)
        j = pick([x for x in cloud_a if cloudC[x] == peak])
        ok = all(cloudC[p] + 2 <= slot for p in g.preds[j] if p in cloud_a) \
            and all(moved_a[p] + 1 <= slot for p in g.preds[j] if p in moved_a)
        if not ok:
            break
        moved_a[j] = slot
        cloud_a.discard(j)
        slot -= 1

    # variant B: cloud schedule shifted to the back, fill the last
    # communication slot, then pull first-finishing jobs to the head
    chain_len = max(depth.values())
    shift = horizon - chain_len - 2
    shiftC = {j: depth[j] + 1 + shift for j in middles}
    back_cands = [j for j in middles if all(s == g.sink for s in g.succs[j])]
    back = min(back_cands, key=g.job_index.__getitem__)
    moved_b = {back: horizon}
    cloud_b = set(middles) - {back}
    slot = 1
    while cloud_b and slot <= horizon - 1:
        low = min(shiftC[j] for j in cloud_b)
        j = pick([x for x in cloud_b if shiftC[x] == low])
        ok = all(shiftC[s] >= slot + 2 for s in g.succs[j] if s in cloud_b) \
            and all(moved_b[s] >= slot + 1 for s in g.succs[j] if s in moved_b)
        if not ok:
            break
        moved_b[j] = slot
        cloud_b.discard(j)
        slot += 1

    def build(moved, cloud):
        loc = {j: SERVER for j in (g.source, g.sink)}
        for j in moved:
            loc[j] = SERVER
        for j in cloud:
            loc[j] = CLOUD
        order = [g.source] + sorted(moved, key=lambda j: (moved[j], g.job_index[j])) + [g.sink]
        return asap_schedule(g, loc, order)

    best = min((build(moved_a, cloud_a), build(moved_b, cloud_b)),
               key=lambda s: sum(1 for j in middles if s.location[j] == CLOUD))
    return outcome_from_schedule(g, best, _guarantee_unit(eps))


# ---------------------------------------------------------------------------
# no communication delays

def _insert_before_descendants(g: TaskGraph, order: list, j: str) -> list:
    """Insert j in front of its first descendant in the server order (end if
    none); keeps the order consistent with precedence."""
    reach = {j}
    stack = [j]
    while stack:
        u = stack.pop()
        for v in g.succs[u]:
            if v not in reach:
                reach.add(v)
                stack.append(v)
    pos = len(order)
    for i, x in enumerate(order):
        if x in reach:
            pos = i
            break
    return order[:pos] + [j] + order[pos:]


def nodelay_identical_makespan(g: TaskGraph, budget: int) -> SolveOutcome:
    """No delays, identical machines: longest chain on the server, everything
    else on the cloud; move latest-starting cloud jobs onto the server until
    the budget holds.  Makespan at most twice the optimum."""
    if not _is_nodelay_identical(g):
        raise ShapeMismatch("needs zero delays and identical server/cloud times")
    sched, order, _ = _chain_and_repair(g, budget)
    maxp = max((int(g.p_server[j]) for j in g.middle_jobs), default=0)
    return outcome_from_schedule(
        g, sched, Guarantee("factor", factor=2.0, augmentation=float(maxp)))


def _chain_and_repair(g: TaskGraph, budget: int):
    path, _ = longest_chain(g)
    chain_mids = [j for j in path if j not in (g.source, g.sink)]
    loc = {j: (SERVER if j in chain_mids or j in (g.source, g.sink) else CLOUD)
           for j in g.jobs}
    order = list(chain_mids)
    sched = asap_schedule(g, loc, [g.source] + order + [g.sink])
    cost = sum(int(g.p_cloud[j]) for j in g.jobs if loc[j] == CLOUD)
    while cost > budget:
        cands = [j for j in g.middle_jobs if loc[j] == CLOUD and g.p_cloud[j] > 0]
        j = max(cands, key=lambda x: (sched.completion[x] - g.p_cloud[x], -g.job_index[x]))
        loc[j] = SERVER
        order = _insert_before_descendants(g, order, j)
        cost -= int(g.p_cloud[j])
        sched = asap_schedule(g, loc, [g.source] + order + [g.sink])
    return sched, order, loc


def nodelay_unit_exact(g: TaskGraph, mode: str, bound: int) -> Optional[SolveOutcome]:
    """No delays, unit sizes: the chain/greedy procedure is exact in both modes."""
    if not _is_nodelay_identical(g) or any(g.p_server[j] != 1 for j in g.middle_jobs):
        raise ShapeMismatch("needs zero delays and unit processing times")
    if mode == MIN_MAKESPAN:
        sched, _, _ = _chain_and_repair(g, bound)
        return outcome_from_schedule(g, sched, EXACT)
    if mode != MIN_COST:
        raise ValueError("unknown mode %r" % (mode,))
    path, chain_len = longest_chain(g)
    if chain_len > bound:
        return None
    chain_mids = [j for j in path if j not in (g.source, g.sink)]
    loc = {j: (SERVER if j in chain_mids or j in (g.source, g.sink) else CLOUD)
           for j in g.jobs}
    order = list(chain_mids)
    sched = asap_schedule(g, loc, [g.source] + order + [g.sink])
    while True:
        cands = [j for j in g.middle_jobs if loc[j] == CLOUD]
        cands.sort(key=lambda x: (-(sched.completion[x] - g.p_cloud[x]), g.job_index[x]))
        committed = False
        for j in cands:
            order2 = _insert_before_descendants(g, order, j)
            loc[j] = SERVER
            cand = asap_schedule(g, loc, [g.source] + order2 + [g.sink])
            if cand.completion[g.sink] <= bound:
                order, sched = order2, cand
                committed = True
                break
            loc[j] = CLOUD
        if not committed:
            break
    return outcome_from_schedule(g, sched, EXACT)

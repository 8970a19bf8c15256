"""Exact pseudo-polynomial programs and scaling wrappers for chain and fully
parallel task graphs.

The cost-minimization tables index time (deadline budget on the server axis),
the makespan-minimization tables index budget.  The epsilon wrappers scale the
time axis only and keep costs unscaled, so cost accounting stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (CHAIN, CLOUD, FULLY_PARALLEL, INF, Schedule, ShapeMismatch,
                    SERVER, TaskGraph, all_server_schedule, asap_schedule,
                    classify_shape, schedule_cost, validate_schedule,
                    zero_makespan_schedule)

MIN_COST = "min_cost"
MIN_MAKESPAN = "min_makespan"


@dataclass(frozen=True)
class SolveQuery:
    mode: str
    bound: int
    epsilon: Optional[float] = None


@dataclass(frozen=True)
class Guarantee:
    kind: str  # "exact" | "cost_opt_makespan_within" | "makespan_within" | "factor"
    factor: Optional[float] = None
    augmentation: Optional[float] = None


EXACT = Guarantee("exact")


@dataclass(frozen=True)
class SolveOutcome:
    schedule: Schedule
    makespan: int
    cost: int
    guarantee: Guarantee


def outcome_from_schedule(g: TaskGraph, sched: Schedule, guarantee: Guarantee) -> SolveOutcome:
    report = validate_schedule(g, sched)
    return SolveOutcome(schedule=sched, makespan=report.makespan,
                        cost=int(report.cost), guarantee=guarantee)


def to_fraction(epsilon) -> Fraction:
    if isinstance(epsilon, Fraction):
        return epsilon
    return Fraction(epsilon).limit_denominator(10 ** 6)


def scale_factor(epsilon, bound: int, n: int, denom: int = 2) -> Fraction:
    """rho = eps * bound / (denom * n), clamped to at least 1 (1 = run unscaled)."""
    rho = to_fraction(epsilon) * bound / (denom * n)
    return max(Fraction(1), rho)


def scale_graph(g: TaskGraph, rho: Fraction) -> TaskGraph:
    """Round all processing times and delays down by rho (inf stays inf)."""
    if rho == 1:
        return g
    def down(v):
        return INF if v == INF else int(Fraction(int(v)) / rho)
    return TaskGraph(
        jobs=g.jobs,
        edges=tuple((u, v, int(Fraction(c) / rho)) for u, v, c in g.edges),
        source=g.source, sink=g.sink,
        p_server={j: down(g.p_server[j]) for j in g.jobs},
        p_cloud={j: down(g.p_cloud[j]) for j in g.jobs},
    )


def scale_deadline(deadline: int, rho: Fraction) -> int:
    return int(math.ceil(Fraction(deadline) / rho))


# ---------------------------------------------------------------------------
# chain core

def _chain_min_cost(g: TaskGraph, spine, deadline: int, cost_of) -> Optional[tuple]:
    """Cheapest assignment of a chain within ``deadline``; returns (cost, locations)."""
    m = len(spine)
    horizon = min(deadline, g.work_bound())
    width = horizon + 1
    srv = [0] * width
    cld = [INF] * width
    choices = []  # per position, per loc: bytes of predecessor loc (0=s, 1=c, 2=dead)
    for idx in range(1, m):
        j = spine[idx]
        edge = g.delay[(spine[idx - 1], j)]
        ps = g.p_server[j]
        pc = g.p_cloud[j]
        nsrv = [INF] * width
        ncld = [INF] * width
        csrv = bytearray(width)
        ccld = bytearray(width)
        for d in range(width):
            # j on the server
            best = INF
            pick = 2
            if ps != INF and ps <= d:
                v = srv[d - int(ps)]
                if v < best:
                    best, pick = v, 0
                if ps + edge <= d:
                    v = cld[d - int(ps) - edge]
                    if v < best:
                        best, pick = v, 1
            nsrv[d] = best
            csrv[d] = pick
            # j on the cloud
            best = INF
            pick = 2
            if pc != INF and pc <= d:
                v = cld[d - int(pc)]
                if v < best:
                    best, pick = v, 1
                if pc + edge <= d:
                    v = srv[d - int(pc) - edge]
                    if v <= best:  # tie toward server predecessor
                        best, pick = v, 0
                if best != INF:
                    best += cost_of[j]
            ncld[d] = best
            ccld[d] = pick
        srv, cld = nsrv, ncld
        choices.append((csrv, ccld))
    if srv[horizon] == INF:
        return None
    # backtrack
    loc = {spine[0]: SERVER}
    cur_loc, d = 0, horizon
    for idx in range(m - 1, 0, -1):
        j = spine[idx]
        csrv, ccld = choices[idx - 1]
        here = csrv if cur_loc == 0 else ccld
        pred = here[d]
        p = g.p_server[j] if cur_loc == 0 else g.p_cloud[j]
        edge = g.delay[(spine[idx - 1], j)]
        loc[j] = SERVER if cur_loc == 0 else CLOUD
        d -= int(p) + (edge if pred != cur_loc else 0)
        cur_loc = pred
    return int(srv[horizon]), loc


def _chain_min_makespan(g: TaskGraph, spine, budget: int) -> Optional[tuple]:
    """Minimum makespan of a chain within cost ``budget``; (makespan, locations)."""
    m = len(spine)
    b_eff = int(min(budget, g.total_cloud_time()))
    width = b_eff + 1
    srv = [0] * width
    cld = [INF] * width
    choices = []
    for idx in range(1, m):
        j = spine[idx]
        edge = g.delay[(spine[idx - 1], j)]
        ps = g.p_server[j]
        pc = g.p_cloud[j]
        nsrv = [INF] * width
        ncld = [INF] * width
        csrv = bytearray(width)
        ccld = bytearray(width)
        for b in range(width):
            best = INF
            pick = 2
            if ps != INF:
                if cld[b] != INF and cld[b] + ps + edge < best:
                    best, pick = cld[b] + ps + edge, 1
                if srv[b] != INF and srv[b] + ps <= best:
                    best, pick = srv[b] + ps, 0
            nsrv[b] = best
            csrv[b] = pick
            best = INF
            pick = 2
            if pc != INF and pc <= b:
                prev = b - int(pc)
                if cld[prev] != INF and cld[prev] + pc < best:
                    best, pick = cld[prev] + pc, 1
                if srv[prev] != INF and srv[prev] + pc + edge <= best:
                    best, pick = srv[prev] + pc + edge, 0
            ncld[b] = best
            ccld[b] = pick
        srv, cld = nsrv, ncld
        choices.append((csrv, ccld))
    if srv[b_eff] == INF:
        return None
    loc = {spine[0]: SERVER}
    cur_loc, b = 0, b_eff
    for idx in range(m - 1, 0, -1):
        j = spine[idx]
        csrv, ccld = choices[idx - 1]
        pred = (csrv if cur_loc == 0 else ccld)[b]
        loc[j] = SERVER if cur_loc == 0 else CLOUD
        if cur_loc == 1:
            b -= int(g.p_cloud[j])
        cur_loc = pred
    return int(srv[b_eff]), loc


# ---------------------------------------------------------------------------
# fully parallel core

def _parallel_combined_delay(g: TaskGraph, j: str) -> int:
    return g.delay[(g.source, j)] + g.delay[(j, g.sink)]


def _parallel_min_cost(g: TaskGraph, deadline: int, cost_of) -> Optional[tuple]:
    """Cheapest fully-parallel assignment within ``deadline``; (cost, locations)."""
    horizon = min(deadline, g.work_bound())
    width = horizon + 1
    cur = [0] * width
    middles = g.middle_jobs
    choices = []
    for j in middles:
        ps = g.p_server[j]
        pc = g.p_cloud[j]
        cloud_ok = pc != INF and pc + _parallel_combined_delay(g, j) <= horizon
        nxt = [INF] * width
        ch = bytearray(width)
        for d in range(width):
            best = INF
            pick = 2
            if cloud_ok and cur[d] != INF:
                best, pick = cur[d] + cost_of[j], 1
            if ps != INF and ps <= d and cur[d - int(ps)] != INF:
                v = cur[d - int(ps)]
                if v <= best:  # tie toward server
                    best, pick = v, 0
            nxt[d] = best
            ch[d] = pick
        cur = nxt
        choices.append(ch)
    if cur[horizon] == INF:
        return None
    loc = {g.source: SERVER, g.sink: SERVER}
    d = horizon
    for i in range(len(middles) - 1, -1, -1):
        j = middles[i]
        pick = choices[i][d]
        if pick == 0:
            loc[j] = SERVER
            d -= int(g.p_server[j])
        else:
            loc[j] = CLOUD
    return int(cur[horizon]), loc


def _parallel_min_makespan(g: TaskGraph, budget: int) -> Optional[tuple]:
    """Minimum makespan within budget via a sweep over cloud-path thresholds.

    For each candidate bound P on cloud paths, jobs whose path exceeds P are
    forced onto the server and a budget-indexed table minimizes server load;
    the best max(load, realized cloud path) over all P is optimal.
    """
    middles = g.middle_jobs
    b_eff = int(min(budget, g.total_cloud_time()))
    paths = {}
    for j in middles:
        pc = g.p_cloud[j]
        paths[j] = INF if pc == INF else int(pc + _parallel_combined_delay(g, j))
    candidates = sorted({0} | {p for p in paths.values() if p != INF})
    best = None  # (makespan, cost, locations)
    for cap in candidates:
        width = b_eff + 1
        cur = [0] * width
        choices = []
        dead = False
        for j in middles:
            ps = g.p_server[j]
            can_cloud = paths[j] <= cap
            can_server = ps != INF
            if not can_cloud and not can_server:
                dead = True
                break
            nxt = [INF] * width
            ch = bytearray(width)
            for b in range(width):
                bv = INF
                pick = 2
                if can_cloud and g.p_cloud[j] <= b:
                    v = cur[b - int(g.p_cloud[j])]
                    if v < bv:
                        bv, pick = v, 1
                if can_server and cur[b] != INF:
                    v = cur[b] + ps
                    if v <= bv:
                        bv, pick = v, 0
                nxt[b] = bv
                ch[b] = pick
            cur = nxt
            choices.append(ch)
        if dead or cur[b_eff] == INF:
            continue
        loc = {g.source: SERVER, g.sink: SERVER}
        b = b_eff
        cost = 0
        cloud_peak = 0
        for i in range(len(middles) - 1, -1, -1):
            j = middles[i]
            if choices[i][b] == 0:
                loc[j] = SERVER
            else:
                loc[j] = CLOUD
                cost += int(g.p_cloud[j])
                cloud_peak = max(cloud_peak, paths[j])
                b -= int(g.p_cloud[j])
        mk = max(int(cur[b_eff]), cloud_peak)
        if best is None or (mk, cost) < (best[0], best[1]):
            best = (mk, cost, loc)
    if best is None:
        return None
    return best[0], best[2]


# ---------------------------------------------------------------------------
# public exact entry points

def _witness(g: TaskGraph, loc: dict, guarantee: Guarantee) -> SolveOutcome:
    order = [j for j in g.topo_order if loc[j] == SERVER]
    sched = asap_schedule(g, loc, order)
    return outcome_from_schedule(g, sched, guarantee)


def dp_chain(g: TaskGraph, query: SolveQuery) -> Optional[SolveOutcome]:
    """Exact chain DP (both objectives), per the four-branch recurrences."""
    shape = classify_shape(g)
    if shape.tag != CHAIN:
        raise ShapeMismatch("dp_chain needs a chain graph, got %s" % shape.tag)
    if query.mode == MIN_COST:
        res = _chain_min_cost(g, shape.spine, query.bound, g.p_cloud)
    elif query.mode == MIN_MAKESPAN:
        res = _chain_min_makespan(g, shape.spine, query.bound)
    else:
        raise ValueError("unknown mode %r" % (query.mode,))
    if res is None:
        return None
    _, loc = res
    return _witness(g, loc, EXACT)


def dp_parallel(g: TaskGraph, query: SolveQuery) -> Optional[SolveOutcome]:
    """Exact fully-parallel DP (both objectives)."""
    shape = classify_shape(g)
    if shape.tag != FULLY_PARALLEL:
        raise ShapeMismatch("dp_parallel needs a fully parallel graph, got %s" % shape.tag)
    if query.mode == MIN_COST:
        res = _parallel_min_cost(g, query.bound, g.p_cloud)
    elif query.mode == MIN_MAKESPAN:
        res = _parallel_min_makespan(g, query.bound)
    else:
        raise ValueError("unknown mode %r" % (query.mode,))
    if res is None:
        return None
    _, loc = res
    return _witness(g, loc, EXACT)


def _scaled_min_cost(g: TaskGraph, shape, deadline: int, rho: Fraction) -> Optional[dict]:
    """Run the right min-cost core on the scaled instance; unscaled costs."""
    sg = scale_graph(g, rho)
    d_hat = scale_deadline(deadline, rho)
    if shape.tag == CHAIN:
        res = _chain_min_cost(sg, shape.spine, d_hat, g.p_cloud)
    else:
        res = _parallel_min_cost(sg, d_hat, g.p_cloud)
    return None if res is None else res[1]


def _scaled_budget_round(g: TaskGraph, shape, sg: TaskGraph, d_hat: int, budget):
    """Smallest scaled deadline whose cheapest cost fits the budget; returns
    the assignment at that deadline (min cost is nonincreasing in the
    deadline, so binary search applies)."""
    def cost_at(m):
        if shape.tag == CHAIN:
            return _chain_min_cost(sg, shape.spine, m, g.p_cloud)
        return _parallel_min_cost(sg, m, g.p_cloud)

    best = cost_at(d_hat)
    if best is None or best[0] > budget:
        return None
    lo, hi = 0, d_hat
    while lo < hi:
        mid = (lo + hi) // 2
        res = cost_at(mid)
        if res is not None and res[0] <= budget:
            hi = mid
            best = res
        else:
            lo = mid + 1
    return best


def fptas_chain_parallel(g: TaskGraph, mode: str, bound: int, epsilon) -> Optional[SolveOutcome]:
    """Scaling wrapper for chains and fully parallel graphs.

    min-cost mode: cost <= OPT(deadline), makespan <= (1 + eps) * deadline.
    min-makespan mode: cost <= budget, makespan <= (1 + eps) * OPT(budget).
    """
    shape = classify_shape(g)
    if shape.tag not in (CHAIN, FULLY_PARALLEL):
        raise ShapeMismatch("fptas_chain_parallel needs a chain or fully parallel graph")
    zero = zero_makespan_schedule(g)
    if zero is not None:
        return outcome_from_schedule(g, zero, EXACT)
    n = len(g.jobs)
    eps = to_fraction(epsilon)
    if mode == MIN_COST:
        allsrv = all_server_schedule(g)
        if allsrv is not None and allsrv.completion[g.sink] <= bound:
            return outcome_from_schedule(g, allsrv, EXACT)
        rho = scale_factor(eps, bound, n, denom=2)
        loc = _scaled_min_cost(g, shape, bound, rho)
        if loc is None:
            return None
        guarantee = EXACT if rho == 1 else Guarantee("cost_opt_makespan_within",
                                                     augmentation=float(1 + eps))
        return _witness(g, loc, guarantee)
    if mode == MIN_MAKESPAN:
        allsrv = all_server_schedule(g)
        d0 = allsrv.completion[g.sink] if allsrv is not None else g.work_bound()
        if d0 == 0:
            return outcome_from_schedule(g, allsrv, EXACT)
        rho0 = to_fraction(eps) * d0 / (4 * n)
        prev = None
        i = 0
        while True:
            d_i = -(-d0 // (2 ** i))  # ceil division
            rho_i = max(Fraction(1), rho0 / (2 ** i))
            sg = scale_graph(g, rho_i)
            d_hat = scale_deadline(d_i, rho_i)
            res = _scaled_budget_round(g, shape, sg, d_hat, bound)
            if res is None:
                break
            guarantee = Guarantee("makespan_within", augmentation=float(1 + eps))
            prev = _witness(g, res[1], guarantee)
            if d_i == 1:
                break
            i += 1
        return prev
    raise ValueError("unknown mode %r" % (mode,))

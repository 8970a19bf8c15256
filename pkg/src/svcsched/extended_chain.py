"""Budget-restrained makespan minimization on extended chains.

State-list sweep along the spine: a state is (timestamp, spine position,
location); each spine gap contributes a set of extensions, one per feasible
gap duration and location pair.  Gaps holding a parallel block decide the
block jobs per duration with fit tests plus a weighted-tardy-jobs subproblem.
The cloud-to-cloud gap case pays for ignored incoming delays by stretching
the window, which costs a factor 2; the special-case variants replace that
step under extra structural assumptions and get rid of the doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .chain_parallel import (EXACT, Guarantee, SolveOutcome,
                             outcome_from_schedule, scale_deadline,
                             scale_graph, to_fraction)
from .model import (CLOUD, INF, AssumptionViolated, Schedule, SERVER,
                    ShapeMismatch, TaskGraph, asap_schedule,
                    extended_chain_decomposition, zero_makespan_schedule)
from .tardy import (ReleaseJob, TardyJob, edd_early_schedule,
                    release_early_schedule, solve_wntj, solve_wntj_release)


@dataclass(frozen=True)
class ChainState:
    t: int
    j: int
    loc: str
    cost: float


@dataclass(frozen=True)
class BlockPlan:
    """Witness for one gap: block jobs sent to the cloud and the processing
    order of the block jobs kept on the server."""
    cloud: tuple
    server_seq: tuple


@dataclass(frozen=True)
class ExtensionEntry:
    dt: int
    from_loc: str
    to_loc: str
    cost: float
    block: Optional[BlockPlan] = None


def _finite(v) -> bool:
    return v != INF


def _direct_entries(g: TaskGraph, prev: str, nxt: str, cost_of) -> list:
    edge = g.delay[(prev, nxt)]
    ps = g.p_server[nxt]
    pc = g.p_cloud[nxt]
    out = []
    if _finite(ps):
        out.append(ExtensionEntry(int(ps), SERVER, SERVER, 0))
        out.append(ExtensionEntry(int(ps) + edge, CLOUD, SERVER, 0))
    if _finite(pc):
        out.append(ExtensionEntry(int(pc) + edge, SERVER, CLOUD, cost_of[nxt]))
        out.append(ExtensionEntry(int(pc), CLOUD, CLOUD, cost_of[nxt]))
    return out


def _classify(block, can_server, can_cloud):
    """Split block jobs into forced-server / forced-cloud / free; None if some
    job fits nowhere."""
    forced_s, forced_c, free = [], [], []
    for j in block:
        s, c = can_server(j), can_cloud(j)
        if not s and not c:
            return None
        if s and not c:
            forced_s.append(j)
        elif c and not s:
            forced_c.append(j)
        else:
            free.append(j)
    return forced_s, forced_c, free


def _delta_cap(g, block, horizon, extra_need):
    total_ps = sum(int(g.p_server[j]) for j in block if _finite(g.p_server[j]))
    need = max([total_ps] + extra_need)
    return min(need, horizon)


def _case_server_server(g, prev, nxt, block, horizon, cost_of):
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    cin = {j: g.delay[(prev, j)] for j in block}
    cout = {j: g.delay[(j, nxt)] for j in block}
    cloud_need = [int(cin[j] + pc[j] + cout[j]) for j in block
                  if not _finite(ps[j]) and _finite(pc[j])]
    cap = _delta_cap(g, block, horizon, cloud_need)
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and ps[j] <= delta,
                          lambda j: _finite(pc[j]) and cin[j] + pc[j] + cout[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        load = sum(int(ps[j]) for j in forced_s)
        if load > delta:
            continue
        wjobs = [TardyJob(p=int(ps[j]), w=cost_of[j], d=delta - load) for j in free]
        _, early = solve_wntj(wjobs)
        server_extra = [free[i] for i in sorted(early)]
        cloud = tuple(sorted(forced_c + [free[i] for i in range(len(free)) if i not in early],
                             key=g.job_index.__getitem__))
        seq = tuple(sorted(forced_s, key=g.job_index.__getitem__)
                    + sorted(server_extra, key=g.job_index.__getitem__))
        cost = sum(cost_of[j] for j in cloud)
        out.append(ExtensionEntry(delta, SERVER, SERVER, cost, BlockPlan(cloud, seq)))
    return out


def _case_server_cloud(g, prev, nxt, block, horizon, cost_of):
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    cin = {j: g.delay[(prev, j)] for j in block}
    cout = {j: g.delay[(j, nxt)] for j in block}
    out_delays = [int(cout[j]) for j in block]
    cloud_need = [int(cin[j] + pc[j]) for j in block
                  if not _finite(ps[j]) and _finite(pc[j])]
    cap = min(horizon, max(
        sum(int(ps[j]) for j in block if _finite(ps[j])) + (max(out_delays) if out_delays else 0),
        *(cloud_need or [0])))
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and ps[j] + cout[j] <= delta,
                          lambda j: _finite(pc[j]) and cin[j] + pc[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        cands = forced_s + free
        wjobs = [TardyJob(p=int(ps[j]), w=(INF if j in forced_s else cost_of[j]),
                          d=delta - int(cout[j])) for j in cands]
        v, early = solve_wntj(wjobs)
        if v == INF:
            continue
        order = [cands[i] for i, _, _ in edd_early_schedule(wjobs, early)]
        cloud = tuple(sorted(forced_c + [cands[i] for i in range(len(cands)) if i not in early],
                             key=g.job_index.__getitem__))
        cost = sum(cost_of[j] for j in cloud)
        out.append(ExtensionEntry(delta, SERVER, CLOUD, cost, BlockPlan(cloud, tuple(order))))
    return out


def _case_cloud_server(g, prev, nxt, block, horizon, cost_of):
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    cin = {j: g.delay[(prev, j)] for j in block}
    cout = {j: g.delay[(j, nxt)] for j in block}
    in_delays = [int(cin[j]) for j in block]
    cloud_need = [int(pc[j] + cout[j]) for j in block
                  if not _finite(ps[j]) and _finite(pc[j])]
    cap = min(horizon, max(
        sum(int(ps[j]) for j in block if _finite(ps[j])) + (max(in_delays) if in_delays else 0),
        *(cloud_need or [0])))
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and cin[j] + ps[j] <= delta,
                          lambda j: _finite(pc[j]) and pc[j] + cout[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        cands = forced_s + free
        rjobs = [ReleaseJob(p=int(ps[j]), w=(INF if j in forced_s else cost_of[j]),
                            r=int(cin[j])) for j in cands]
        v, early = solve_wntj_release(rjobs, delta)
        if v == INF:
            continue
        order = [cands[i] for i, _, _ in release_early_schedule(rjobs, early, delta)]
        cloud = tuple(sorted(forced_c + [cands[i] for i in range(len(cands)) if i not in early],
                             key=g.job_index.__getitem__))
        cost = sum(cost_of[j] for j in cloud)
        out.append(ExtensionEntry(delta, CLOUD, SERVER, cost, BlockPlan(cloud, tuple(order))))
    return out


def _case_cloud_cloud_stretch(g, prev, nxt, block, horizon, cost_of):
    """Case with both spine neighbours on the cloud: handle outgoing delays
    precisely, wait out the biggest incoming delay of the server picks."""
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    cin = {j: g.delay[(prev, j)] for j in block}
    cout = {j: g.delay[(j, nxt)] for j in block}
    out_delays = [int(cout[j]) for j in block]
    cloud_need = [int(pc[j]) for j in block if not _finite(ps[j]) and _finite(pc[j])]
    cap = min(horizon, max(
        sum(int(ps[j]) for j in block if _finite(ps[j])) + (max(out_delays) if out_delays else 0),
        *(cloud_need or [0])))
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and cin[j] + ps[j] + cout[j] <= delta,
                          lambda j: _finite(pc[j]) and pc[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        cands = forced_s + free
        wjobs = [TardyJob(p=int(ps[j]), w=(INF if j in forced_s else cost_of[j]),
                          d=delta - int(cout[j])) for j in cands]
        v, early = solve_wntj(wjobs)
        if v == INF:
            continue
        order = [cands[i] for i, _, _ in edd_early_schedule(wjobs, early)]
        stretch = max([int(cin[j]) for j in order], default=0)
        cloud = tuple(sorted(forced_c + [cands[i] for i in range(len(cands)) if i not in early],
                             key=g.job_index.__getitem__))
        cost = sum(cost_of[j] for j in cloud)
        out.append(ExtensionEntry(delta + stretch, CLOUD, CLOUD, cost,
                                  BlockPlan(cloud, tuple(order))))
    return out


# ---------------------------------------------------------------------------
# special-case replacements for the cloud-to-cloud gap

ASSUME_LOCAL_SMALL = 1
ASSUME_CMAX = 2
ASSUME_UNIFORM_IN = 3


def block_assumption(g: TaskGraph, prev: str, nxt: str, block, c_max: int) -> Optional[int]:
    """Which FPTAS assumption the block satisfies (preference: uniform
    incoming delays, then locally small, then bounded by c_max)."""
    cin = [g.delay[(prev, j)] for j in block]
    cout = [g.delay[(j, nxt)] for j in block]
    if len(set(cin)) == 1:
        return ASSUME_UNIFORM_IN
    minproc = min(min(p for p in (g.p_server[j], g.p_cloud[j]) if _finite(p))
                  for j in block)
    if minproc >= max(cin + cout):
        return ASSUME_LOCAL_SMALL
    if max(cin + cout) <= c_max:
        return ASSUME_CMAX
    return None


def _case_cloud_cloud_uniform(g, prev, nxt, block, horizon, cost_of):
    """All incoming delays equal: shift the server window, no stretching."""
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    common_in = int(g.delay[(prev, block[0])])
    cout = {j: g.delay[(j, nxt)] for j in block}
    out_delays = [int(cout[j]) for j in block]
    cloud_need = [int(pc[j]) for j in block if not _finite(ps[j]) and _finite(pc[j])]
    cap = min(horizon, max(
        sum(int(ps[j]) for j in block if _finite(ps[j])) + common_in
        + (max(out_delays) if out_delays else 0),
        *(cloud_need or [0])))
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and common_in + ps[j] + cout[j] <= delta,
                          lambda j: _finite(pc[j]) and pc[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        cands = forced_s + free
        wjobs = [TardyJob(p=int(ps[j]), w=(INF if j in forced_s else cost_of[j]),
                          d=delta - common_in - int(cout[j])) for j in cands]
        v, early = solve_wntj(wjobs)
        if v == INF:
            continue
        order = [cands[i] for i, _, _ in edd_early_schedule(wjobs, early)]
        cloud = tuple(sorted(forced_c + [cands[i] for i in range(len(cands)) if i not in early],
                             key=g.job_index.__getitem__))
        cost = sum(cost_of[j] for j in cloud)
        out.append(ExtensionEntry(delta, CLOUD, CLOUD, cost, BlockPlan(cloud, tuple(order))))
    return out


def _case_cloud_cloud_local_small(g, prev, nxt, block, horizon, cost_of):
    """Locally small delays: only the first and last server job feel their
    delays, so brute-force that pair."""
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    cin = {j: g.delay[(prev, j)] for j in block}
    cout = {j: g.delay[(j, nxt)] for j in block}
    out_delays = [int(cout[j]) for j in block]
    in_delays = [int(cin[j]) for j in block]
    cloud_need = [int(pc[j]) for j in block if not _finite(ps[j]) and _finite(pc[j])]
    cap = min(horizon, max(
        sum(int(ps[j]) for j in block if _finite(ps[j]))
        + (max(in_delays) if in_delays else 0) + (max(out_delays) if out_delays else 0),
        *(cloud_need or [0])))
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and cin[j] + ps[j] + cout[j] <= delta,
                          lambda j: _finite(pc[j]) and pc[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        best = None
        if not forced_s:
            cost = sum(cost_of[j] for j in forced_c + free)
            best = (cost, BlockPlan(tuple(sorted(forced_c + free, key=g.job_index.__getitem__)), ()))
        cands = forced_s + free
        for alpha in cands:
            for omega in cands:
                if alpha == omega:
                    if any(f != alpha for f in forced_s):
                        continue
                    srv = [alpha]
                else:
                    srv = None
                if srv is not None:
                    window = delta - int(cin[alpha]) - int(cout[alpha]) - int(ps[alpha])
                    if window < 0:
                        continue
                    rest = [j for j in cands if j != alpha]
                    cloud = sorted(forced_c + rest, key=g.job_index.__getitem__)
                    cost = sum(cost_of[j] for j in cloud)
                    plan = BlockPlan(tuple(cloud), (alpha,))
                else:
                    anchor = {alpha, omega} | set(forced_s)
                    middles = [j for j in cands if j not in anchor]
                    window = delta - int(cin[alpha]) - int(cout[omega]) \
                        - sum(int(ps[j]) for j in anchor)
                    if window < 0:
                        continue
                    wjobs = [TardyJob(p=int(ps[j]), w=cost_of[j], d=window) for j in middles]
                    v, early = solve_wntj(wjobs)
                    inner = sorted(anchor - {alpha, omega}, key=g.job_index.__getitem__) \
                        + sorted((middles[i] for i in early), key=g.job_index.__getitem__)
                    seq = (alpha, *inner, omega)
                    cloud = sorted(forced_c + [middles[i] for i in range(len(middles))
                                               if i not in early],
                                   key=g.job_index.__getitem__)
                    cost = sum(cost_of[j] for j in cloud)
                    plan = BlockPlan(tuple(cloud), seq)
                if best is None or cost < best[0]:
                    best = (cost, plan)
        if best is not None:
            out.append(ExtensionEntry(delta, CLOUD, CLOUD, best[0], best[1]))
    return out


def _case_cloud_cloud_cmax(g, prev, nxt, block, horizon, cost_of, c_max):
    """Delays bounded by c_max: brute-force the server content of the first
    and last c_max time steps of the window, the middle region is delay-free."""
    ps = {j: g.p_server[j] for j in block}
    pc = {j: g.p_cloud[j] for j in block}
    cin = {j: int(g.delay[(prev, j)]) for j in block}
    cout = {j: int(g.delay[(j, nxt)]) for j in block}
    cloud_need = [int(pc[j]) for j in block if not _finite(ps[j]) and _finite(pc[j])]
    cap = min(horizon, max(
        sum(int(ps[j]) for j in block if _finite(ps[j])) + 2 * c_max,
        *(cloud_need or [0])))
    out = []
    for delta in range(cap + 1):
        split = _classify(block,
                          lambda j: _finite(ps[j]) and cin[j] + ps[j] + cout[j] <= delta,
                          lambda j: _finite(pc[j]) and pc[j] <= delta)
        if split is None:
            continue
        forced_s, forced_c, free = split
        zero_server = [j for j in forced_s + free
                       if ps[j] == 0 and cin[j] + cout[j] <= delta]
        cands = [j for j in forced_s + free if j not in zero_server]
        forced_set = set(forced_s) - set(zero_server)
        best = None
        for k1 in range(min(c_max, len(cands)) + 1):
            for pre in permutations(cands, k1):
                t = 0
                ok = True
                for j in pre:
                    start = max(t, cin[j])
                    if start >= c_max and c_max > 0:
                        ok = False
                        break
                    if c_max == 0:
                        ok = False
                        break
                    t = start + int(ps[j])
                    if t + cout[j] > delta:
                        ok = False
                        break
                if not ok:
                    continue
                pre_end = t
                rest1 = [j for j in cands if j not in pre]
                for k2 in range(min(c_max, len(rest1)) + 1):
                    for suf in permutations(rest1, k2):
                        hi = delta
                        ok2 = True
                        for j in reversed(suf):
                            comp = min(hi, delta - cout[j])
                            start = comp - int(ps[j])
                            if start < cin[j] or comp <= delta - c_max:
                                ok2 = False
                                break
                            hi = start
                        if not ok2 or hi < pre_end:
                            continue
                        wstart = max(pre_end, c_max)
                        wend = min(hi, delta - c_max)
                        middles = [j for j in rest1 if j not in suf]
                        window = wend - wstart
                        wjobs = [TardyJob(p=int(ps[j]),
                                          w=(INF if j in forced_set else cost_of[j]),
                                          d=window) for j in middles]
                        v, early = solve_wntj(wjobs)
                        if v == INF:
                            continue
                        mid_early = [middles[i] for i in sorted(early)]
                        cloud = sorted(forced_c + [middles[i] for i in range(len(middles))
                                                   if i not in early],
                                       key=g.job_index.__getitem__)
                        cost = sum(cost_of[j] for j in cloud)
                        seq = tuple(pre) + tuple(sorted(zero_server, key=g.job_index.__getitem__)) \
                            + tuple(sorted(mid_early, key=g.job_index.__getitem__)) + tuple(suf)
                        if best is None or cost < best[0]:
                            best = (cost, BlockPlan(tuple(cloud), seq))
        if best is not None:
            out.append(ExtensionEntry(delta, CLOUD, CLOUD, best[0], best[1]))
    return out


def build_extensions(g: TaskGraph, prev: str, nxt: str, block, horizon: int,
                     cost_of=None, case_d: str = "stretch",
                     c_max: int = 2, assumption: Optional[int] = None) -> list:
    """All state extensions for the gap between spine jobs prev and nxt.

    Without a block these are the four direct location pairs (including the
    next spine job's processing).  With a block, one entry per feasible gap
    duration and location pair; the next spine job's own processing time and
    cost are accounted when states are combined.
    """
    if cost_of is None:
        cost_of = g.p_cloud
    if not block:
        return _direct_entries(g, prev, nxt, cost_of)
    entries = []
    entries += _case_server_server(g, prev, nxt, block, horizon, cost_of)
    entries += _case_server_cloud(g, prev, nxt, block, horizon, cost_of)
    entries += _case_cloud_server(g, prev, nxt, block, horizon, cost_of)
    if case_d == "stretch":
        entries += _case_cloud_cloud_stretch(g, prev, nxt, block, horizon, cost_of)
    else:
        if assumption is None:
            assumption = block_assumption(g, prev, nxt, block, c_max)
        if assumption == ASSUME_UNIFORM_IN:
            entries += _case_cloud_cloud_uniform(g, prev, nxt, block, horizon, cost_of)
        elif assumption == ASSUME_LOCAL_SMALL:
            entries += _case_cloud_cloud_local_small(g, prev, nxt, block, horizon, cost_of)
        elif assumption == ASSUME_CMAX:
            entries += _case_cloud_cloud_cmax(g, prev, nxt, block, horizon, cost_of, c_max)
        else:
            raise AssumptionViolated(
                "block between %r and %r satisfies no special-case assumption" % (prev, nxt))
    return _prune_entries(entries)


def _prune_entries(entries: list) -> list:
    """Within each location pair keep only undominated (dt, cost) entries."""
    by_pair = {}
    for e in entries:
        by_pair.setdefault((e.from_loc, e.to_loc), []).append(e)
    out = []
    for pair, group in sorted(by_pair.items()):
        group.sort(key=lambda e: (e.dt, e.cost))
        best = INF
        for e in group:
            if e.cost < best:
                out.append(e)
                best = e.cost
    return out


def _sweep(g: TaskGraph, spine, blocks, horizon: int, budget, cost_of,
           case_d: str, c_max: int = 2, assumptions=None):
    """Run the state-list sweep; returns (t, cost, decisions) or None."""
    states = {(0, SERVER): (0, None)}
    for idx in range(1, len(spine)):
        prev, nxt = spine[idx - 1], spine[idx]
        block = blocks[idx - 1]
        assumption = assumptions[idx - 1] if assumptions else None
        entries = build_extensions(g, prev, nxt, block, horizon, cost_of,
                                   case_d, c_max, assumption)
        new = {}
        for (t, loc), (cost, bp) in sorted(states.items()):
            for e in entries:
                if e.from_loc != loc:
                    continue
                dt, ecost = e.dt, e.cost
                if block:
                    p_next = g.p_server[nxt] if e.to_loc == SERVER else g.p_cloud[nxt]
                    if p_next == INF:
                        continue
                    dt += int(p_next)
                    if e.to_loc == CLOUD:
                        ecost += cost_of[nxt]
                nt = t + dt
                nc = cost + ecost
                if nt > 2 * horizon or nc > budget:
                    continue
                key = (nt, e.to_loc)
                if key not in new or nc < new[key][0]:
                    new[key] = (nc, (bp, e))
        # cull: per location keep the (t, cost) Pareto set
        culled = {}
        for locv in (SERVER, CLOUD):
            best = INF
            for (t, loc) in sorted(new):
                if loc != locv:
                    continue
                c, bp = new[(t, loc)]
                if c < best:
                    culled[(t, loc)] = (c, bp)
                    best = c
        states = culled
        if not states:
            return None
    (t, loc), (cost, bp) = min(states.items(), key=lambda kv: (kv[0][0], kv[1][0]))
    decisions = []
    node = bp
    while node is not None:
        parent, entry = node
        decisions.append(entry)
        node = parent
    decisions.reverse()
    return t, cost, decisions


def _witness(g: TaskGraph, spine, blocks, decisions) -> Schedule:
    """Rebuild a concrete schedule on the original instance from the sweep's
    per-gap decisions (ASAP with the decided locations and server order)."""
    loc = {spine[0]: SERVER}
    server_order = [spine[0]]
    for idx, entry in enumerate(decisions, start=1):
        nxt = spine[idx]
        if entry.block is not None:
            for j in entry.block.cloud:
                loc[j] = CLOUD
            for j in entry.block.server_seq:
                loc[j] = SERVER
                server_order.append(j)
        loc[nxt] = entry.to_loc
        if entry.to_loc == SERVER:
            server_order.append(nxt)
    return asap_schedule(g, loc, server_order)


def _binary_search_makespan(g: TaskGraph, spine, blocks, budget, eps_prime,
                            case_d: str, c_max: int = 2, assumptions=None):
    n_total = len(g.jobs)

    def run(T):
        rho = max(Fraction(1), to_fraction(eps_prime) * T / n_total)
        sg = scale_graph(g, rho)
        horizon = scale_deadline(T, rho)
        return _sweep(sg, spine, blocks, horizon, budget, g.p_cloud,
                      case_d, c_max, assumptions)

    hi = g.work_bound()
    if hi == 0:
        hi = 1
    if run(hi) is None:
        return None
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if run(mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    result = run(lo)
    if result is None:  # boundary jitter: fall back to the known-feasible top
        result = run(g.work_bound())
    _, _, decisions = result
    return _witness(g, spine, blocks, decisions)


def approx_makespan_extended(g: TaskGraph, budget: int, epsilon,
                             c_max: int = 2) -> Optional[SolveOutcome]:
    """Schedule with cost <= budget and makespan <= (2 + eps) * OPT(budget)."""
    deco = extended_chain_decomposition(g)
    if deco is None:
        raise ShapeMismatch("approx_makespan_extended needs an extended chain")
    zero = zero_makespan_schedule(g)
    if zero is not None:
        return outcome_from_schedule(g, zero, EXACT)
    spine, blocks = deco
    eps_prime = to_fraction(epsilon) / 3
    sched = _binary_search_makespan(g, spine, blocks, budget, eps_prime, "stretch")
    if sched is None:
        return None
    guarantee = Guarantee("factor", factor=float(2 + to_fraction(epsilon)))
    return outcome_from_schedule(g, sched, guarantee)


def fptas_extended_special(g: TaskGraph, budget: int, epsilon,
                           c_max: int = 2) -> Optional[SolveOutcome]:
    """(1 + eps)-approximation when every block satisfies one of the special
    assumptions; raises AssumptionViolated naming the first failing block."""
    deco = extended_chain_decomposition(g)
    if deco is None:
        raise ShapeMismatch("fptas_extended_special needs an extended chain")
    spine, blocks = deco
    assumptions = []
    for idx, block in enumerate(blocks):
        if not block:
            assumptions.append(None)
            continue
        a = block_assumption(g, spine[idx], spine[idx + 1], block, c_max)
        if a is None:
            raise AssumptionViolated(
                "block between %r and %r satisfies no special-case assumption"
                % (spine[idx], spine[idx + 1]))
        assumptions.append(a)
    zero = zero_makespan_schedule(g)
    if zero is not None:
        return outcome_from_schedule(g, zero, EXACT)
    eps_prime = to_fraction(epsilon) / 3
    sched = _binary_search_makespan(g, spine, blocks, budget, eps_prime,
                                    "special", c_max, assumptions)
    if sched is None:
        return None
    guarantee = Guarantee("makespan_within", augmentation=float(1 + to_fraction(epsilon)))
    return outcome_from_schedule(g, sched, guarantee)

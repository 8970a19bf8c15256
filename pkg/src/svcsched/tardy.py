"""Single-machine weighted number of tardy jobs (1 || sum w_j U_j).

Pseudo-polynomial dynamic program over jobs in earliest-due-date order with a
time axis of width min(sum p, max d).  Jobs with infinite weight are mandatory:
they may never be late, and an infeasible set of mandatory jobs yields a late
weight of +inf so callers can discard the candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

INF = math.inf


@dataclass(frozen=True)
class TardyJob:
    p: int
    w: float  # nonnegative int or INF (mandatory early)
    d: int


@dataclass(frozen=True)
class ReleaseJob:
    p: int
    w: float
    r: int


def solve_wntj(jobs: Sequence[TardyJob]) -> tuple:
    """Minimum total weight of late jobs plus a witness early index set.

    The witness early set is EDD-feasible.  Ties between equally cheap early
    sets are broken by greedily preferring inclusion of lower original indices
    (tracked as a secondary max-bitmask criterion in the DP).
    """
    n = len(jobs)
    if n == 0:
        return 0, frozenset()
    order = sorted(range(n), key=lambda i: (jobs[i].d, i))
    width = min(sum(jobs[i].p for i in range(n)), max(jobs[i].d for i in range(n)))
    width = max(width, 0)

    def bit(i):
        return 1 << (n - 1 - i)

    # best[t] = (late weight, early mask) over jobs seen so far with early load t
    best = {0: (0, 0)}
    for i in order:
        job = jobs[i]
        nxt = {}
        for t, (w, mask) in best.items():
            # i late
            if job.w != INF:
                cand = (w + job.w, mask)
                cur = nxt.get(t)
                if cur is None or cand[0] < cur[0] or (cand[0] == cur[0] and cand[1] > cur[1]):
                    nxt[t] = cand
            # i early, completing at t + p
            t2 = t + job.p
            if t2 <= job.d and t2 <= width:
                cand = (w, mask | bit(i))
                cur = nxt.get(t2)
                if cur is None or cand[0] < cur[0] or (cand[0] == cur[0] and cand[1] > cur[1]):
                    nxt[t2] = cand
        best = nxt
        if not best:
            return INF, frozenset()

    weight, mask = min(best.values(), key=lambda wm: (wm[0], -wm[1]))
    if weight == INF:
        return INF, frozenset()
    early = frozenset(i for i in range(n) if mask & bit(i))
    return weight, early


def edd_early_schedule(jobs: Sequence[TardyJob], early) -> list:
    """Simulate the early set in EDD order; returns [(index, start, completion)]."""
    order = sorted(early, key=lambda i: (jobs[i].d, i))
    out = []
    t = 0
    for i in order:
        start = t
        t += jobs[i].p
        out.append((i, start, t))
    return out


def solve_wntj_release(jobs: Sequence[ReleaseJob], deadline: int) -> tuple:
    """Release dates and a common deadline, solved by time reversal.

    Each job maps to a due date deadline - r; scheduling the reversed early
    set back to front respects every release date.
    """
    forced_weight = 0
    mapped = []
    keep = []
    for i, job in enumerate(jobs):
        due = deadline - job.r
        if due < 0:
            if job.w == INF:
                return INF, frozenset()
            forced_weight += job.w
            continue
        mapped.append(TardyJob(p=job.p, w=job.w, d=due))
        keep.append(i)
    weight, early = solve_wntj(mapped)
    if weight == INF:
        return INF, frozenset()
    return weight + forced_weight, frozenset(keep[i] for i in early)


def release_early_schedule(jobs: Sequence[ReleaseJob], early, deadline: int) -> list:
    """Concrete times for the early set of the release variant.

    Returns [(index, start, completion)] in processing order; starts respect
    releases and every completion is at most the common deadline.
    """
    mapped = {i: TardyJob(p=jobs[i].p, w=jobs[i].w, d=deadline - jobs[i].r) for i in early}
    order = sorted(early, key=lambda i: (mapped[i].d, i))
    t = 0
    rev = []
    for i in order:
        start = t
        t += jobs[i].p
        rev.append((i, deadline - t, deadline - start))
    rev.reverse()
    return rev

"""Core data model: task graphs, schedules, validation and structural analysis.

A problem instance is a DAG with a unique source and sink.  Every job can run
either on the single sequential server machine (free) or on one of unboundedly
many cloud machines (paying its cloud processing time).  An edge (i, j) with
communication delay c forces j to start at least c time units after i finishes
whenever i and j run in different contexts.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

INF = math.inf

SERVER = "server"
CLOUD = "cloud"


class SchedulingError(Exception):
    """Base class for solver errors."""


class ShapeMismatch(SchedulingError):
    """The task graph does not have the shape this algorithm requires."""


class InstanceTooLarge(SchedulingError):
    """Instance exceeds the size cap of an exhaustive routine."""


class StateSpaceExceeded(SchedulingError):
    """A state enumeration outgrew its configured cap."""


class AssumptionViolated(SchedulingError):
    """Instance violates the structural assumption of a special-case solver."""


def is_time(v) -> bool:
    """True for a nonnegative integer or +inf."""
    if v == INF:
        return True
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


@dataclass(frozen=True)
class TaskGraph:
    """Immutable task graph with per-job server/cloud times and edge delays.

    ``p_server``/``p_cloud`` map job ids to nonnegative integers or ``INF``.
    The source and sink are pinned to the server by ``p_cloud = INF``.
    """

    jobs: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]
    source: str
    sink: str
    p_server: Mapping[str, float]
    p_cloud: Mapping[str, float]

    @classmethod
    def create(cls, job_times: Mapping[str, tuple], edges: Iterable[tuple],
               source: str, sink: str) -> "TaskGraph":
        """Build a graph from ``{job: (p_server, p_cloud)}`` plus edge triples."""
        jobs = tuple(job_times)
        ps = {j: t[0] for j, t in job_times.items()}
        pc = {j: t[1] for j, t in job_times.items()}
        return cls(jobs=jobs, edges=tuple((u, v, int(c)) for u, v, c in edges),
                   source=source, sink=sink, p_server=ps, p_cloud=pc)

    # -- derived structure (cached_property writes to __dict__, safe on frozen) --

    @cached_property
    def job_index(self) -> dict:
        return {j: i for i, j in enumerate(self.jobs)}

    @cached_property
    def succs(self) -> dict:
        out = {j: [] for j in self.jobs}
        for u, v, _ in self.edges:
            out[u].append(v)
        return {j: tuple(sorted(vs, key=self.job_index.__getitem__)) for j, vs in out.items()}

    @cached_property
    def preds(self) -> dict:
        out = {j: [] for j in self.jobs}
        for u, v, _ in self.edges:
            out[v].append(u)
        return {j: tuple(sorted(us, key=self.job_index.__getitem__)) for j, us in out.items()}

    @cached_property
    def delay(self) -> dict:
        return {(u, v): c for u, v, c in self.edges}

    @cached_property
    def topo_order(self) -> tuple:
        indeg = {j: len(self.preds[j]) for j in self.jobs}
        ready = [j for j in self.jobs if indeg[j] == 0]
        order = []
        while ready:
            ready.sort(key=self.job_index.__getitem__, reverse=True)
            j = ready.pop()
            order.append(j)
            nxt = []
            for v in self.succs[j]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    nxt.append(v)
            ready.extend(nxt)
        return tuple(order)

    @property
    def middle_jobs(self) -> tuple:
        return tuple(j for j in self.jobs if j not in (self.source, self.sink))

    def canonical_key(self):
        """Hashable identity used for caching derived tables."""
        return (self.jobs, self.edges, self.source, self.sink,
                tuple(sorted(self.p_server.items())),
                tuple(sorted(self.p_cloud.items())))

    def total_server_time(self) -> float:
        return sum(self.p_server[j] for j in self.jobs if self.p_server[j] != INF)

    def total_cloud_time(self) -> float:
        return sum(self.p_cloud[j] for j in self.middle_jobs if self.p_cloud[j] != INF)

    def work_bound(self) -> int:
        """Upper bound on any useful deadline: every assignment's ASAP makespan
        is at most the total processing (cheapest finite side) plus all delays."""
        total = 0
        for j in self.jobs:
            opts = [p for p in (self.p_server[j], self.p_cloud[j]) if p != INF]
            total += max(opts) if opts else 0
        total += sum(c for _, _, c in self.edges)
        return int(total)


@dataclass(frozen=True)
class Schedule:
    """Location assignment plus completion times."""

    location: Mapping[str, str]
    completion: Mapping[str, int]


@dataclass(frozen=True)
class InstanceReport:
    valid: bool
    violations: tuple


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    makespan: int
    cost: float
    violations: tuple


# shape tags
CHAIN = "chain"
FULLY_PARALLEL = "fully_parallel"
EXTENDED_CHAIN = "extended_chain"
GENERAL = "general"


@dataclass(frozen=True)
class ShapeClass:
    """Most specific shape tag, plus spine/block decomposition when it exists.

    ``blocks[i]`` is the (possibly empty) parallel block between ``spine[i]``
    and ``spine[i+1]``; an empty block means a direct spine edge.
    """

    tag: str
    spine: tuple = ()
    blocks: tuple = ()


def validate_instance(g: TaskGraph) -> InstanceReport:
    """Report every violated task-graph invariant (report style, never raises)."""
    bad = []
    if len(set(g.jobs)) != len(g.jobs):
        bad.append(("DuplicateJob", "job ids are not unique"))
    jobset = set(g.jobs)
    if g.source not in jobset:
        bad.append(("BadSourceSink", "source %r not a job" % (g.source,)))
    if g.sink not in jobset:
        bad.append(("BadSourceSink", "sink %r not a job" % (g.sink,)))
    if g.source == g.sink:
        bad.append(("BadSourceSink", "source and sink must differ"))
    for j in g.jobs:
        if not is_time(g.p_server.get(j)) or not is_time(g.p_cloud.get(j)):
            bad.append(("BadTime", "job %r needs nonnegative integer or inf times" % (j,)))
    seen_pairs = set()
    for u, v, c in g.edges:
        if u not in jobset or v not in jobset:
            bad.append(("BadEdge", "edge (%r, %r) references unknown job" % (u, v)))
        if u == v:
            bad.append(("SelfLoop", "self loop on %r" % (u,)))
        if (u, v) in seen_pairs:
            bad.append(("DuplicateEdge", "duplicate edge (%r, %r)" % (u, v)))
        seen_pairs.add((u, v))
        if not (isinstance(c, int) and c >= 0):
            bad.append(("BadTime", "edge (%r, %r) needs a nonnegative integer delay" % (u, v)))
    if bad:
        return InstanceReport(False, tuple(bad))

    indeg = {j: 0 for j in g.jobs}
    outdeg = {j: 0 for j in g.jobs}
    for u, v, _ in g.edges:
        outdeg[u] += 1
        indeg[v] += 1
    sources = [j for j in g.jobs if indeg[j] == 0]
    sinks = [j for j in g.jobs if outdeg[j] == 0]
    if set(sources) != {g.source}:
        bad.append(("MultipleSources", "in-degree-0 nodes: %s" % (sorted(sources),)))
    if set(sinks) != {g.sink}:
        bad.append(("MultipleSinks", "out-degree-0 nodes: %s" % (sorted(sinks),)))
    if len(g.topo_order) != len(g.jobs):
        bad.append(("Cycle", "graph contains a directed cycle"))
    if g.p_server.get(g.source) != 0 or g.p_server.get(g.sink) != 0:
        bad.append(("BadSourceSink", "source and sink need server time 0"))
    if g.p_cloud.get(g.source) != INF or g.p_cloud.get(g.sink) != INF:
        bad.append(("BadSourceSink", "source and sink need cloud time inf"))
    if not bad:
        reach = _reachable_from(g, g.source)
        if reach != set(g.jobs):
            bad.append(("Unreachable", "not reachable from source: %s" % (sorted(set(g.jobs) - reach),)))
        coreach = _reaching_to(g, g.sink)
        if coreach != set(g.jobs):
            bad.append(("Unreachable", "sink not reachable from: %s" % (sorted(set(g.jobs) - coreach),)))
    return InstanceReport(not bad, tuple(bad))


def _reachable_from(g: TaskGraph, start: str) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.succs[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _reaching_to(g: TaskGraph, goal: str) -> set:
    seen = {goal}
    stack = [goal]
    while stack:
        u = stack.pop()
        for v in g.preds[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def proc_time(g: TaskGraph, s: Schedule, j: str) -> float:
    return g.p_server[j] if s.location.get(j) == SERVER else g.p_cloud[j]


def schedule_cost(g: TaskGraph, s: Schedule) -> float:
    return sum(g.p_cloud[j] for j in g.jobs if s.location.get(j) == CLOUD)


def validate_schedule(g: TaskGraph, s: Schedule) -> ValidationReport:
    """Check conditions (a) server exclusivity and (b) precedence plus delays.

    Zero-length jobs are instantaneous points and never conflict on the server.
    """
    bad = []
    for j in g.jobs:
        loc = s.location.get(j)
        if loc not in (SERVER, CLOUD):
            bad.append(("BadLocation", "job %r has no valid location" % (j,)))
            continue
        p = proc_time(g, s, j)
        if p == INF:
            bad.append(("BadLocation", "job %r placed where its time is infinite" % (j,)))
        c = s.completion.get(j)
        if c is None or c < 0:
            bad.append(("BadLocation", "job %r has no valid completion time" % (j,)))
    if bad:
        return ValidationReport(False, 0, 0, tuple(bad))

    # (a) server intervals [C - p, C] pairwise disjoint (positive lengths only)
    intervals = sorted(
        (s.completion[j] - g.p_server[j], s.completion[j], j)
        for j in g.jobs
        if s.location[j] == SERVER and g.p_server[j] > 0
    )
    for (s1, e1, j1), (s2, e2, j2) in zip(intervals, intervals[1:]):
        if s2 < e1:
            bad.append(("ServerOverlap", "jobs %r and %r overlap on the server" % (j1, j2)))

    # (b) per edge: C(i) (+ delay when contexts differ) <= C(j) - p(j)
    for u, v, c in g.edges:
        cross = s.location[u] != s.location[v]
        lhs = s.completion[u] + (c if cross else 0)
        rhs = s.completion[v] - proc_time(g, s, v)
        if lhs > rhs:
            if cross and s.completion[u] <= rhs:
                bad.append(("DelayViolated", "edge (%r, %r) misses its communication delay" % (u, v)))
            else:
                bad.append(("PrecedenceViolated", "edge (%r, %r) violates precedence" % (u, v)))
    for j in g.jobs:
        if s.completion[j] - proc_time(g, s, j) < 0:
            bad.append(("PrecedenceViolated", "job %r starts before time 0" % (j,)))

    makespan = s.completion[g.sink]
    cost = schedule_cost(g, s)
    return ValidationReport(not bad, makespan, cost, tuple(bad))


def zero_makespan_schedule(g: TaskGraph) -> Optional[Schedule]:
    """Return a makespan-0 schedule when one exists.

    Drop all zero-delay edges; each connected component of the remaining
    positive-delay edges must run entirely in one context, so a zero schedule
    exists iff every component is all-zero on the server or all-zero on the
    cloud.
    """
    parent = {j: j for j in g.jobs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, c in g.edges:
        if c > 0:
            parent[find(u)] = find(v)

    groups = {}
    for j in g.jobs:
        groups.setdefault(find(j), []).append(j)

    location = {}
    for members in groups.values():
        if all(g.p_server[j] == 0 for j in members):
            for j in members:
                location[j] = SERVER
        elif all(g.p_cloud[j] == 0 for j in members):
            for j in members:
                location[j] = CLOUD
        else:
            return None
    return Schedule(location=location, completion={j: 0 for j in g.jobs})


def compute_phi(g: TaskGraph, cap: int = 10 ** 6) -> int:
    """Maximum number of edges leaving any downward-closed job set containing
    the source.  Diagnostic: enumerates ideals breadth-first with a hard cap."""
    succs = g.succs
    preds = g.preds
    start = frozenset((g.source,))
    seen = {start}
    stack = [start]
    best = 0
    while stack:
        cur = stack.pop()
        crossing = sum(1 for u in cur for v in succs[u] if v not in cur)
        if crossing > best:
            best = crossing
        for j in g.jobs:
            if j not in cur and all(p in cur for p in preds[j]):
                nxt = cur | {j}
                if nxt not in seen:
                    if len(seen) >= cap:
                        raise StateSpaceExceeded(
                            "ideal enumeration exceeded cap %d (phi >= %d)" % (cap, best))
                    seen.add(nxt)
                    stack.append(nxt)
    return best


def longest_chain(g: TaskGraph) -> tuple:
    """Maximum-weight source-to-sink path, weighted by server processing times."""
    best = {}
    back = {}
    for j in g.topo_order:
        incoming = [best[p] for p in g.preds[j]]
        base = max(incoming) if incoming else 0
        best[j] = base + g.p_server[j]
        if incoming:
            cands = [p for p in g.preds[j] if best[p] == base]
            back[j] = min(cands, key=g.job_index.__getitem__)
    path = [g.sink]
    while path[-1] in back:
        path.append(back[path[-1]])
    path.reverse()
    length = best[g.sink]
    return path, int(length) if length != INF else INF


def extended_chain_decomposition(g: TaskGraph) -> Optional[tuple]:
    """Return (spine, blocks) when the graph is an extended chain, else None.

    Greedy maximal-spine walk: single-successor/single-predecessor nodes join
    the spine; otherwise all successors must form a parallel block feeding a
    common next spine node.
    """
    spine = [g.source]
    blocks = []
    u = g.source
    while u != g.sink:
        succ = g.succs[u]
        if not succ:
            return None
        if len(succ) == 1 and g.preds[succ[0]] == (u,):
            spine.append(succ[0])
            blocks.append(())
            u = succ[0]
            continue
        block = sorted(succ, key=g.job_index.__getitem__)
        nxt = None
        for b in block:
            if g.preds[b] != (u,):
                return None
            sb = g.succs[b]
            if len(sb) != 1:
                return None
            if nxt is None:
                nxt = sb[0]
            elif sb[0] != nxt:
                return None
        if nxt is None or set(g.preds[nxt]) != set(block):
            return None
        spine.append(nxt)
        blocks.append(tuple(block))
        u = nxt
    if len(spine) + sum(len(b) for b in blocks) != len(g.jobs):
        return None
    return tuple(spine), tuple(blocks)


def classify_shape(g: TaskGraph) -> ShapeClass:
    """Most specific tag among chain, fully parallel, extended chain, general."""
    deco = extended_chain_decomposition(g)
    if deco is not None:
        spine, blocks = deco
        if all(len(b) == 0 for b in blocks):
            return ShapeClass(CHAIN, spine, blocks)
        if len(spine) == 2 and len(blocks) == 1 and blocks[0]:
            return ShapeClass(FULLY_PARALLEL, spine, blocks)
        return ShapeClass(EXTENDED_CHAIN, spine, blocks)
    return ShapeClass(GENERAL)


def asap_schedule(g: TaskGraph, location: Mapping[str, str],
                  server_order: Sequence[str]) -> Schedule:
    """Earliest completion times for a fixed assignment and server sequence.

    Every validity constraint is a lower bound C(v) >= C(u) + w, so earliest
    times are longest paths over precedence edges plus server-sequence edges.
    The server order must be consistent with precedence reachability.
    """
    proc = {j: (g.p_server[j] if location[j] == SERVER else g.p_cloud[j]) for j in g.jobs}
    for j, p in proc.items():
        if p == INF:
            raise ValueError("job %r assigned to a context with infinite time" % (j,))
    extra = list(zip(server_order, server_order[1:]))
    indeg = {j: len(g.preds[j]) for j in g.jobs}
    for u, v in extra:
        indeg[v] += 1
    succ_extra = {}
    for u, v in extra:
        succ_extra.setdefault(u, []).append(v)

    comp = {}
    ready = deque(j for j in g.topo_order if indeg[j] == 0)
    done = 0
    pending = {j: indeg[j] for j in g.jobs}
    comp_lb = {j: proc[j] for j in g.jobs}
    while ready:
        u = ready.popleft()
        comp[u] = int(comp_lb[u])
        done += 1
        for v in g.succs[u]:
            cross = location[u] != location[v]
            lb = comp[u] + (g.delay[(u, v)] if cross else 0) + proc[v]
            if lb > comp_lb[v]:
                comp_lb[v] = lb
            pending[v] -= 1
            if pending[v] == 0:
                ready.append(v)
        for v in succ_extra.get(u, ()):
            lb = comp[u] + proc[v]
            if lb > comp_lb[v]:
                comp_lb[v] = lb
            pending[v] -= 1
            if pending[v] == 0:
                ready.append(v)
    if done != len(g.jobs):
        raise ValueError("server order conflicts with precedence")
    return Schedule(location=dict(location), completion=comp)


def all_server_schedule(g: TaskGraph) -> Optional[Schedule]:
    """Everything on the server in topological order; None if impossible."""
    if any(g.p_server[j] == INF for j in g.jobs):
        return None
    loc = {j: SERVER for j in g.jobs}
    return asap_schedule(g, loc, list(g.topo_order))

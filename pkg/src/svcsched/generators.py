"""Instance factories: hardness reductions reused as generators plus random
instance families.

The knapsack and partition reductions are decision-equivalent with their
source problems; the 3-CNF reduction builds the full unit-size/unit-delay
gadget (interlocked anchor chain, variable pairs, clause and literal jobs,
and per-literal connection chains) and annotates every job's role so that
structural verifiers need not re-derive them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import CHAIN, EXTENDED_CHAIN, FULLY_PARALLEL, INF, TaskGraph

SHAPE_CHAIN = "Chain"
SHAPE_FULLY_PARALLEL = "FullyParallel"
SHAPE_EXTENDED_CHAIN = "ExtendedChain"
SHAPE_LAYERED = "LayeredDag"
SHAPE_UNIT = "UnitDag"

SHAPES = (SHAPE_CHAIN, SHAPE_FULLY_PARALLEL, SHAPE_EXTENDED_CHAIN,
          SHAPE_LAYERED, SHAPE_UNIT)


@dataclass(frozen=True)
class KnapsackSpec:
    items: tuple  # (weight, value) pairs
    capacity: int
    threshold: int


@dataclass(frozen=True)
class CnfSpec:
    num_vars: int
    clauses: tuple  # 3-tuples of signed variable indices

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 3:
                raise ValueError("every clause needs exactly 3 literals: %r" % (cl,))
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError("literal %d out of range" % lit)


@dataclass(frozen=True)
class RandomSpec:
    shape: str
    n: int
    max_p: int = 8
    max_c: int = 4
    seed: int = 0


@dataclass(frozen=True)
class GeneratedInstance:
    graph: TaskGraph
    deadline: int
    budget: int
    metadata: dict = field(default_factory=dict)


def _ends(job_times, src="src", snk="snk"):
    job_times[src] = (0, INF)
    job_times[snk] = (0, INF)
    return src, snk


def gen_from_knapsack(spec: KnapsackSpec) -> GeneratedInstance:
    """Chain instance: item i gets server time w+v and cloud time v, zero
    delays; deadline sum(v) + C, budget sum(v) - V.  Feasible iff the
    knapsack instance is."""
    total_v = sum(v for _, v in spec.items)
    if spec.threshold > total_v:
        raise ValueError("value threshold exceeds the total value")
    job_times = {}
    names = []
    for i, (w, v) in enumerate(spec.items, start=1):
        name = "it%d" % i
        names.append(name)
        job_times[name] = (w + v, v)
    order = ["src"] + names + ["snk"]
    src, snk = _ends(job_times)
    job_times = {j: job_times[j] for j in order}
    edges = [(order[i], order[i + 1], 0) for i in range(len(order) - 1)]
    g = TaskGraph.create(job_times, edges, src, snk)
    deadline = total_v + spec.capacity
    budget = total_v - spec.threshold
    return GeneratedInstance(g, deadline, budget, {"reduction": "knapsack"})


def gen_from_partition(values: Sequence[int]) -> GeneratedInstance:
    """Fully parallel instance with identical times and zero delays;
    deadline = budget = floor(sum / 2)."""
    job_times = {}
    names = []
    for i, v in enumerate(values, start=1):
        name = "e%d" % i
        names.append(name)
        job_times[name] = (v, v)
    order = ["src"] + names + ["snk"]
    src, snk = _ends(job_times)
    job_times = {j: job_times[j] for j in order}
    if names:
        edges = [("src", j, 0) for j in names] + [(j, "snk", 0) for j in names]
    else:
        edges = [("src", "snk", 0)]
    g = TaskGraph.create(job_times, edges, src, snk)
    total = sum(values)
    half = total // 2
    return GeneratedInstance(g, half, half,
                             {"reduction": "partition", "odd_total": total % 2 == 1})


def parse_dimacs(text: str) -> CnfSpec:
    num_vars = 0
    clauses = []
    cur = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError("bad DIMACS header: %r" % line)
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    return CnfSpec(num_vars=num_vars, clauses=tuple(clauses))


def gen_unit_from_3sat(cnf: CnfSpec) -> GeneratedInstance:
    """Unit-size unit-delay gadget; satisfiable iff (deadline, budget)-feasible.

    deadline = 12 + m + n for m variables and n clauses; the interlocked
    anchor chain spans deadline - 2 steps; variable pairs hang off anchors
    1+i..5+i, clause jobs off 7+m+p..9+m+p, and each literal is fed by a
    connection chain of 1 + (m - i) + p jobs tapped at anchors 3+i and 6+m+p.
    """
    m = cnf.num_vars
    n = len(cnf.clauses)
    deadline = 12 + m + n
    length = deadline - 2
    job_times = {"src": (0, INF)}
    edges = []
    roles = {"src": "source", "snk": "sink"}

    def add(job, role):
        job_times[job] = (1, 1)
        roles[job] = role

    for i in range(1, length + 1):
        add("a%d" % i, "anchor")
        add("b%d" % i, "anchor")
    edges += [("src", "a1", 1), ("src", "b1", 1)]
    for i in range(1, length):
        edges += [("a%d" % i, "a%d" % (i + 1), 1), ("b%d" % i, "b%d" % (i + 1), 1),
                  ("a%d" % i, "b%d" % (i + 1), 1), ("b%d" % i, "a%d" % (i + 1), 1)]

    for i in range(1, m + 1):
        for name in ("x%d" % i, "nx%d" % i):
            add(name, "variable")
            edges += [("a%d" % (1 + i), name, 1), (name, "a%d" % (5 + i), 1)]

    chains_meta = []
    for p, clause in enumerate(cnf.clauses, start=1):
        cl = "cl%d" % p
        add(cl, "clause")
        edges += [("a%d" % (7 + m + p), cl, 1), (cl, "a%d" % (9 + m + p), 1)]
        for q, lit in enumerate(clause, start=1):
            i = abs(lit)
            var_job = ("x%d" % i) if lit > 0 else ("nx%d" % i)
            lit_job = "c%dL%d" % (p, q)
            add(lit_job, "literal")
            edges.append((lit_job, cl, 1))
            k = 1 + (m - i) + p
            prev = var_job
            first = None
            for step in range(1, k + 1):
                node = "c%dL%dk%d" % (p, q, step)
                add(node, "chain")
                edges.append((prev, node, 1))
                if first is None:
                    first = node
                prev = node
            edges.append((prev, lit_job, 1))
            edges.append(("a%d" % (3 + i), first, 1))
            edges.append((prev, "a%d" % (6 + m + p), 1))
            chains_meta.append({"literal": lit, "var_job": var_job,
                                "literal_job": lit_job, "length": k,
                                "start_anchor": 3 + i, "end_anchor": 6 + m + p})

    job_times["snk"] = (0, INF)
    edges += [("a%d" % length, "snk", 1), ("b%d" % length, "snk", 1)]
    g = TaskGraph.create(job_times, edges, "src", "snk")
    budget = len(g.jobs) - (2 + m + n)
    meta = {"reduction": "3sat", "num_vars": m, "num_clauses": n,
            "anchor_length": length, "roles": roles, "chains": chains_meta}
    return GeneratedInstance(g, deadline, budget, meta)


# ---------------------------------------------------------------------------
# random families

def gen_random(spec: RandomSpec) -> TaskGraph:
    """Shape-respecting random instance, deterministic per seed."""
    if spec.n < 2:
        raise ValueError("need at least source and sink")
    rng = random.Random(spec.seed)
    mids = spec.n - 2
    if spec.shape == SHAPE_CHAIN:
        return _random_chainlike(rng, mids, spec, blocks=False)
    if spec.shape == SHAPE_FULLY_PARALLEL:
        return _random_parallel(rng, mids, spec)
    if spec.shape == SHAPE_EXTENDED_CHAIN:
        return _random_chainlike(rng, mids, spec, blocks=True)
    if spec.shape == SHAPE_LAYERED:
        return _random_layered(rng, mids, spec, unit=False)
    if spec.shape == SHAPE_UNIT:
        return _random_layered(rng, mids, spec, unit=True)
    raise ValueError("unknown shape %r" % (spec.shape,))


def _rand_times(rng, spec):
    return rng.randint(0, spec.max_p), rng.randint(0, spec.max_p)


def _rand_delay(rng, spec):
    return rng.randint(0, spec.max_c)


def _random_chainlike(rng, mids, spec, blocks: bool) -> TaskGraph:
    job_times = {"src": (0, INF)}
    edges = []
    counter = [0]

    def fresh():
        counter[0] += 1
        name = "j%d" % counter[0]
        job_times[name] = _rand_times(rng, spec)
        return name

    prev = "src"
    left = mids
    while left > 0:
        if blocks and left >= 2 and rng.random() < 0.5:
            size = rng.randint(2, min(4, left))
            members = [fresh() for _ in range(size)]
            left -= size
            if left == 0:
                nxt = "snk"
            else:
                nxt = fresh()  # a block must feed a spine job
                left -= 1
            for node in members:
                edges.append((prev, node, _rand_delay(rng, spec)))
                edges.append((node, nxt, _rand_delay(rng, spec)))
            prev = nxt
        else:
            node = fresh()
            edges.append((prev, node, _rand_delay(rng, spec)))
            prev = node
            left -= 1
    if prev != "snk":
        edges.append((prev, "snk", _rand_delay(rng, spec)))
    job_times["snk"] = (0, INF)
    return TaskGraph.create(job_times, edges, "src", "snk")


def _random_parallel(rng, mids, spec) -> TaskGraph:
    job_times = {"src": (0, INF)}
    edges = []
    names = []
    for i in range(1, mids + 1):
        name = "j%d" % i
        names.append(name)
        job_times[name] = _rand_times(rng, spec)
    for name in names:
        edges.append(("src", name, _rand_delay(rng, spec)))
        edges.append((name, "snk", _rand_delay(rng, spec)))
    if not names:
        edges.append(("src", "snk", _rand_delay(rng, spec)))
    job_times["snk"] = (0, INF)
    return TaskGraph.create(job_times, edges, "src", "snk")


def _random_layered(rng, mids, spec, unit: bool) -> TaskGraph:
    job_times = {"src": (0, INF)}
    layers = []
    left = mids
    while left > 0:
        size = rng.randint(1, min(3, left))
        layers.append(size)
        left -= size
    names = []
    counter = 0
    for size in layers:
        layer = []
        for _ in range(size):
            counter += 1
            name = "j%d" % counter
            job_times[name] = (1, 1) if unit else _rand_times(rng, spec)
            layer.append(name)
        names.append(layer)
    job_times["snk"] = (0, INF)

    def delay():
        return 1 if unit else _rand_delay(rng, spec)

    edges = []
    seen = set()

    def connect(u, v):
        if (u, v) not in seen:
            seen.add((u, v))
            edges.append((u, v, delay()))

    if not names:
        connect("src", "snk")
    else:
        for v in names[0]:
            connect("src", v)
        for a, b in zip(names, names[1:]):
            for v in b:
                connect(rng.choice(a), v)
            for u in a:
                if not any((u, v) in seen for v in b):
                    connect(u, rng.choice(b))
            for u in a:
                for v in b:
                    if rng.random() < 0.3:
                        connect(u, v)
        for v in names[-1]:
            connect(v, "snk")
    return TaskGraph.create(job_times, edges, "src", "snk")

import random

import pytest

from svcsched.model import INF, TaskGraph
from svcsched.generators import RandomSpec, gen_random

MIXED_SHAPES = ("Chain", "FullyParallel", "ExtendedChain", "LayeredDag", "UnitDag")


def make_graph(job_times, edges, source="src", sink="snk"):
    return TaskGraph.create(job_times, edges, source, sink)


@pytest.fixture
def e1():
    """Chain src -> j1 -> j2 -> snk with ps=(2,3), pc=(1,1), delays 1,2,1."""
    return make_graph(
        {"src": (0, INF), "j1": (2, 1), "j2": (3, 1), "snk": (0, INF)},
        [("src", "j1", 1), ("j1", "j2", 2), ("j2", "snk", 1)])


@pytest.fixture
def e8():
    """No delays, identical machines: a(4) -> c(2), b(5) independent."""
    return make_graph(
        {"src": (0, INF), "a": (4, 4), "b": (5, 5), "c": (2, 2), "snk": (0, INF)},
        [("src", "a", 0), ("src", "b", 0), ("a", "c", 0), ("c", "snk", 0), ("b", "snk", 0)])


@pytest.fixture
def diamond_unit():
    return make_graph(
        {"src": (0, INF), "a": (1, 1), "b": (1, 1), "snk": (0, INF)},
        [("src", "a", 1), ("src", "b", 1), ("a", "snk", 1), ("b", "snk", 1)])


def random_corpus(count, max_jobs, seed_base, shapes=MIXED_SHAPES, max_p=4, max_c=3):
    """Deterministic list of valid random instances with at most max_jobs jobs."""
    out = []
    rng = random.Random(seed_base)
    i = 0
    while len(out) < count:
        shape = shapes[i % len(shapes)]
        n = rng.randint(3, max_jobs)
        g = gen_random(RandomSpec(shape=shape, n=n, max_p=max_p, max_c=max_c,
                                  seed=seed_base * 1000003 + i))
        i += 1
        if len(g.jobs) <= max_jobs:
            out.append(g)
    return out


def special_ext_graph(seed, flavor):
    """Random extended chain whose blocks satisfy one FPTAS assumption:
    'uniform' incoming delays, 'local' (processing dominates delays) or
    'cmax' (all block delays at most 1)."""
    r = random.Random(seed)
    job_times = {"src": (0, INF)}
    edges = []
    cnt = [0]

    def fresh(p=None):
        cnt[0] += 1
        name = "j%d" % cnt[0]
        job_times[name] = p if p else (r.randint(0, 4), r.randint(0, 4))
        return name

    prev = "src"
    left = r.randint(3, 7)
    while left > 0:
        if left >= 2 and r.random() < 0.6:
            size = r.randint(2, min(3, left))
            left -= size
            if flavor == "uniform":
                cin = r.randint(0, 3)
                members = [fresh() for _ in range(size)]
                for mjob in members:
                    edges.append((prev, mjob, cin))
            elif flavor == "local":
                members = [fresh((r.randint(2, 4), r.randint(2, 4))) for _ in range(size)]
                for mjob in members:
                    edges.append((prev, mjob, r.randint(0, 2)))
            else:
                members = [fresh((r.randint(0, 3), r.randint(0, 3))) for _ in range(size)]
                for k, mjob in enumerate(members):
                    edges.append((prev, mjob, k % 2))
            if left == 0:
                nxt = "snk"
            else:
                nxt = fresh()
                left -= 1
            for mjob in members:
                edges.append((mjob, nxt, r.randint(0, 2) if flavor != "cmax" else r.randint(0, 1)))
            prev = nxt
        else:
            node = fresh()
            edges.append((prev, node, r.randint(0, 3)))
            prev = node
            left -= 1
    if prev != "snk":
        edges.append((prev, "snk", r.randint(0, 3)))
    job_times["snk"] = (0, INF)
    return TaskGraph.create(job_times, edges, "src", "snk")


def nodelay_graph(seed, unit=False, max_jobs=8):
    """Layered DAG with zero delays and identical server/cloud times."""
    rng = random.Random(seed)
    g = gen_random(RandomSpec(shape="LayeredDag", n=rng.randint(4, max_jobs),
                              max_p=4, max_c=0, seed=seed))
    times = {}
    for j in g.jobs:
        if j in (g.source, g.sink):
            times[j] = (0, INF)
        else:
            p = 1 if unit else int(g.p_server[j])
            times[j] = (p, p)
    return TaskGraph.create(times, [(u, v, 0) for u, v, _ in g.edges], g.source, g.sink)

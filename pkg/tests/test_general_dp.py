import math

import pytest

from svcsched.general_dp import (approx_pareto, dyn_prog, dyn_prog_stats,
                                 fptas_min_makespan, rounded_min_cost,
                                 replay_block_shift)
from svcsched.model import (INF, StateSpaceExceeded, compute_phi,
                            validate_schedule)
from svcsched.oracle import (oracle_min_cost, oracle_min_makespan,
                             oracle_pareto)

from conftest import make_graph, random_corpus


def test_e1_exact_examples(e1):
    assert dyn_prog(e1, 5)[0] == 0
    assert dyn_prog(e1, 4)[0] == 2
    assert dyn_prog(e1, 3) is None


def test_diamond_matches_oracle(diamond_unit):
    for d in range(0, 6):
        got = dyn_prog(diamond_unit, d)
        want = oracle_min_cost(diamond_unit, d)
        assert (got is None) == (want is None)
        if got is not None:
            assert got[0] == want[0]


def test_dyn_prog_schedules_are_valid():
    for g in random_corpus(20, 7, seed_base=53):
        tps = int(g.total_server_time())
        for d in (tps // 2, tps):
            res = dyn_prog(g, d)
            if res is None:
                continue
            cost, sched = res
            rep = validate_schedule(g, sched)
            assert rep.valid
            assert rep.makespan <= d
            assert rep.cost == cost


def test_matches_oracle_every_deadline():
    for g in random_corpus(20, 7, seed_base=59):
        for d in range(int(g.total_server_time()) + 1):
            got = dyn_prog(g, d)
            want = oracle_min_cost(g, d)
            assert (got is None) == (want is None)
            if got is not None:
                assert got[0] == want[0]


def test_state_count_within_lemma_bound():
    for g in random_corpus(10, 6, seed_base=61, max_p=3):
        d = int(g.total_server_time())
        if d == 0:
            continue
        phi = compute_phi(g)
        stats = dyn_prog_stats(g, d)
        n = len(g.jobs)
        assert stats.peak_states <= d * (d * n) ** phi + 1
        assert stats.max_open <= phi


def test_state_cap_raises():
    g = random_corpus(1, 8, seed_base=67, shapes=("LayeredDag",))[0]
    with pytest.raises(StateSpaceExceeded):
        dyn_prog(g, int(g.total_server_time()), state_cap=2)


def test_rounded_min_cost_examples(e1):
    out = rounded_min_cost(e1, 4, 0.5)
    assert out.cost <= 2 and out.makespan <= 6
    out = rounded_min_cost(e1, 5, 0.01)
    assert out.cost == 0 and out.makespan <= 5


def test_rounded_zero_makespan_precheck():
    g = make_graph({"src": (0, INF), "a": (0, 5), "snk": (0, INF)},
                   [("src", "a", 0), ("a", "snk", 0)])
    out = rounded_min_cost(g, 3, 0.5)
    assert (out.makespan, out.cost) == (0, 0)


def test_fptas_min_makespan_examples(e1):
    out = fptas_min_makespan(e1, 0, 0.5)
    assert out.cost == 0 and out.makespan <= math.ceil(1.5 * 5)
    out = fptas_min_makespan(e1, 2, 0.5)
    assert out.cost <= 2 and out.makespan <= math.ceil(1.5 * 4)


def test_fptas_min_makespan_zero_instance():
    g = make_graph({"src": (0, INF), "a": (0, 2), "snk": (0, INF)},
                   [("src", "a", 0), ("a", "snk", 0)])
    out = fptas_min_makespan(g, 99, 0.5)
    assert (out.makespan, out.cost) == (0, 0)


def test_contracts_on_corpus():
    for g in random_corpus(12, 7, seed_base=71):
        tps = int(g.total_server_time())
        tpc = int(g.total_cloud_time())
        for eps in (0.1, 1.0):
            for d in sorted({tps // 2, tps}):
                want = oracle_min_cost(g, d)
                out = rounded_min_cost(g, d, eps)
                if want is None:
                    continue
                assert out is not None
                assert out.cost <= want[0]
                assert out.makespan <= math.ceil((1 + eps) * d)
                rep = validate_schedule(g, out.schedule)
                assert rep.valid and (rep.makespan, rep.cost) == (out.makespan, out.cost)
            for b in sorted({0, tpc // 2}):
                want = oracle_min_makespan(g, b)
                out = fptas_min_makespan(g, b, eps)
                assert out is not None and want is not None
                assert out.cost <= b
                assert out.makespan <= math.ceil((1 + eps) * want[0])


def test_replay_block_shift_repairs_conflicts(e1):
    loc = {"src": "server", "j1": "server", "j2": "server", "snk": "server"}
    planned = {"src": 0, "j1": 0, "j2": 0, "snk": 0}  # everything too early
    sched = replay_block_shift(e1, loc, planned)
    rep = validate_schedule(e1, sched)
    assert rep.valid and rep.makespan == 5


def test_pareto_example(e1):
    pts = approx_pareto(e1, 0.2)
    got = [(p.makespan, p.cost) for p in pts]
    for mk, cost in [(5, 0), (4, 2)]:  # exact front
        assert any(m <= 1.2 * mk and c <= 1.2 * cost for m, c in got)
    for p in pts:
        rep = validate_schedule(e1, p.witness)
        assert rep.valid and (rep.makespan, rep.cost) == (p.makespan, p.cost)


def test_pareto_zero_instance():
    g = make_graph({"src": (0, INF), "a": (0, 5), "snk": (0, INF)},
                   [("src", "a", 0), ("a", "snk", 0)])
    pts = approx_pareto(g, 0.2)
    assert [(p.makespan, p.cost) for p in pts] == [(0, 0)]


def test_pareto_single_job_graph():
    g = make_graph({"src": (0, INF), "a": (3, 1), "snk": (0, INF)},
                   [("src", "a", 1), ("a", "snk", 1)])
    exact = oracle_pareto(g)
    pts = approx_pareto(g, 0.2)
    for p in exact:
        assert any(q.makespan <= 1.2 * p.makespan and q.cost <= 1.2 * p.cost for q in pts)


def test_pareto_internally_non_dominating():
    for g in random_corpus(10, 6, seed_base=73):
        pts = [(p.makespan, p.cost) for p in approx_pareto(g, 0.3)]
        for a in pts:
            for b in pts:
                if a != b:
                    assert not (a[0] <= b[0] and a[1] <= b[1])

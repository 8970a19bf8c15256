"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every expected value is either recomputed by an independent brute
force here or taken from the exhaustive oracle.
"""

import math
import random
import time

import pytest

from svcsched.chain_parallel import (MIN_COST, MIN_MAKESPAN, SolveQuery,
                                     dp_chain, dp_parallel,
                                     fptas_chain_parallel)
from svcsched.extended_chain import (approx_makespan_extended,
                                     block_assumption, fptas_extended_special)
from svcsched.general_dp import (approx_pareto, dyn_prog, fptas_min_makespan,
                                 rounded_min_cost)
from svcsched.generators import (CnfSpec, KnapsackSpec, RandomSpec,
                                 gen_from_knapsack, gen_from_partition,
                                 gen_random, gen_unit_from_3sat)
from svcsched.heuristics import (nodelay_identical_makespan,
                                 nodelay_unit_exact, unit_schedule)
from svcsched.model import (CHAIN, FULLY_PARALLEL, INF, AssumptionViolated,
                            classify_shape, extended_chain_decomposition,
                            longest_chain, validate_instance,
                            validate_schedule)
from svcsched.oracle import (oracle_decide, oracle_min_cost,
                             oracle_min_makespan, oracle_pareto)
from svcsched.tardy import TardyJob, solve_wntj

from conftest import nodelay_graph, random_corpus, special_ext_graph


def test_criterion_01_oracle_equivalence_exact_engines():
    t0 = time.perf_counter()
    checked = 0
    for g in random_corpus(300, 8, seed_base=101):
        tag = classify_shape(g).tag
        for d in range(int(g.total_server_time()) + 1):
            want = oracle_min_cost(g, d)
            wcost = None if want is None else want[0]
            got = dyn_prog(g, d)
            gcost = None if got is None else got[0]
            assert gcost == wcost, (g, d)
            if tag == CHAIN:
                out = dp_chain(g, SolveQuery(MIN_COST, d))
                assert (None if out is None else out.cost) == wcost
            elif tag == FULLY_PARALLEL:
                out = dp_parallel(g, SolveQuery(MIN_COST, d))
                assert (None if out is None else out.cost) == wcost
            checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 300, "criterion 1 must finish within 5 minutes"
    print("CRITERION 1 (oracle equivalence, exact engines): PASS "
          "(%d deadline queries on 300 instances, %.1fs)" % (checked, elapsed))


def test_criterion_02_fptas_contracts():
    rng = random.Random(103)
    checked = 0
    for g in random_corpus(200, 8, seed_base=103):
        tps = int(g.total_server_time())
        tpc = int(g.total_cloud_time())
        d = rng.randint(0, tps)
        b = rng.randint(0, max(0, tpc))
        for eps in (0.1, 0.5, 1.0):
            want = oracle_min_cost(g, d)
            out = rounded_min_cost(g, d, eps)
            if want is not None:
                assert out is not None
                assert out.cost <= want[0]
                assert out.makespan <= math.ceil((1 + eps) * d)
            elif out is not None:
                assert out.makespan <= math.ceil((1 + eps) * d)
            wantb = oracle_min_makespan(g, b)
            outb = fptas_min_makespan(g, b, eps)
            assert wantb is not None and outb is not None
            assert outb.cost <= b
            assert outb.makespan <= math.ceil((1 + eps) * wantb[0])
            checked += 2
    print("CRITERION 2 (FPTAS contracts): PASS (%d checks, zero failures)" % checked)


def test_criterion_03_extended_chain_factor():
    rng = random.Random(107)
    count = 0
    special = 0
    while count < 100:
        flavor = ("plain", "uniform", "local", "cmax")[count % 4]
        if flavor == "plain":
            g = gen_random(RandomSpec(shape="ExtendedChain", n=rng.randint(5, 9),
                                      max_p=4, max_c=3, seed=9000 + count))
        else:
            g = special_ext_graph(9500 + count, flavor)
        if len(g.jobs) > 9:
            count += 1
            continue
        tpc = int(g.total_cloud_time())
        b = rng.randint(0, max(0, tpc))
        want = oracle_min_makespan(g, b)
        out = approx_makespan_extended(g, b, 0.5)
        if want is None:
            assert out is None or out.cost <= b
        else:
            assert out is not None
            assert out.cost <= b
            if want[0] > 0:
                assert out.makespan <= (2 + 0.5) * want[0]
            else:
                assert out.makespan == 0
            spine, blocks = extended_chain_decomposition(g)
            ok = all(block_assumption(g, spine[i], spine[i + 1], bl, 1) is not None
                     for i, bl in enumerate(blocks) if bl)
            if ok:
                sp = fptas_extended_special(g, b, 0.5, c_max=1)
                assert sp is not None and sp.cost <= b
                if want[0] > 0:
                    assert sp.makespan <= math.ceil((1 + 0.5) * want[0])
                special += 1
        count += 1
    assert special >= 30
    print("CRITERION 3 (extended-chain factors): PASS "
          "(100 instances, %d also ran the special-case variant)" % special)


def test_criterion_04_wntj_equals_brute_force():
    rng = random.Random(109)
    for trial in range(500):
        n = rng.randint(0, 10)
        jobs = [TardyJob(p=rng.randint(0, 5),
                         w=(INF if rng.random() < 0.1 else rng.randint(0, 6)),
                         d=rng.randint(0, 14)) for _ in range(n)]
        best = INF
        for mask in range(1 << n):
            t = 0
            ok = True
            for i in sorted((i for i in range(n) if mask >> i & 1),
                            key=lambda i: (jobs[i].d, i)):
                t += jobs[i].p
                if t > jobs[i].d:
                    ok = False
                    break
            if ok:
                w = sum(jobs[i].w for i in range(n) if not (mask >> i & 1))
                best = min(best, w)
        got, early = solve_wntj(jobs)
        assert got == best, (trial, jobs)
        if got != INF:
            t = 0
            for i in sorted(early, key=lambda i: (jobs[i].d, i)):
                t += jobs[i].p
                assert t <= jobs[i].d
    print("CRITERION 4 (weighted tardy jobs vs brute force): PASS (500 trials)")


def test_criterion_05_reduction_equivalence():
    rng = random.Random(113)
    kn = 0
    for _ in range(120):
        n = rng.randint(0, 6)
        items = tuple((rng.randint(0, 6), rng.randint(0, 6)) for _ in range(n))
        capacity = rng.randint(0, 14)
        total_v = sum(v for _, v in items)
        threshold = rng.randint(0, total_v) if items else 0
        feasible = any(
            sum(w for k, (w, _) in enumerate(items) if mask >> k & 1) <= capacity
            and sum(v for k, (_, v) in enumerate(items) if mask >> k & 1) >= threshold
            for mask in range(1 << n))
        gen = gen_from_knapsack(KnapsackSpec(items, capacity, threshold))
        got = oracle_decide(gen.graph, gen.deadline, gen.budget) is not None
        assert got == feasible, (items, capacity, threshold)
        kn += 1
    pt = 0
    for _ in range(120):
        n = rng.randint(0, 6)
        vals = [rng.randint(0, 6) for _ in range(n)]
        total = sum(vals)
        feasible = total % 2 == 0 and any(
            2 * sum(v for k, v in enumerate(vals) if mask >> k & 1) == total
            for mask in range(1 << n))
        gen = gen_from_partition(vals)
        got = oracle_decide(gen.graph, gen.deadline, gen.budget) is not None
        assert got == feasible, vals
        pt += 1
    print("CRITERION 5 (reduction equivalence): PASS "
          "(%d knapsack + %d partition specs)" % (kn, pt))


def test_criterion_06_sat_gadget_structure():
    gen = gen_unit_from_3sat(CnfSpec(1, ((1, 1, 1),)))
    assert gen.deadline == 14
    assert len(gen.graph.jobs) == 38
    roles = gen.metadata["roles"]
    assert sum(1 for r in roles.values() if r == "anchor") == 2 * (gen.deadline - 2)

    rng = random.Random(127)
    for _ in range(20):
        m = rng.randint(1, 4)
        n = rng.randint(1, 3)
        clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, m) for _ in range(3))
                        for _ in range(n))
        gen = gen_unit_from_3sat(CnfSpec(m, clauses))
        rep = validate_instance(gen.graph)
        assert rep.valid, rep.violations
        roles = gen.metadata["roles"]
        assert sum(1 for r in roles.values() if r == "anchor") == 2 * (gen.deadline - 2)
        for ch in gen.metadata["chains"]:
            slack = (ch["end_anchor"] - ch["start_anchor"] - 1) - ch["length"]
            assert slack == 1
    print("CRITERION 6 (3-CNF gadget structure): PASS (20 formulas + fixed counts)")


def test_criterion_07_unit_heuristic_bounds():
    rng = random.Random(131)
    done = 0
    while done < 500:
        g = gen_random(RandomSpec(shape="UnitDag", n=rng.randint(4, 14),
                                  max_p=1, max_c=1, seed=70_000 + done))
        _, chain_len = longest_chain(g)
        d = chain_len + 2 + rng.randint(0, 4)
        n_mid = len(g.middle_jobs)
        for eps in (0.25, 0.5, 1.0):
            out = unit_schedule(g, d, eps)
            assert out is not None
            rep = validate_schedule(g, out.schedule)
            assert rep.valid
            assert rep.makespan <= math.ceil((1 + eps) * d)
            if n_mid > (1 + eps) * d:
                assert rep.cost <= math.ceil((1 + eps) / (2 * eps) * (n_mid - d))
        done += 1
    print("CRITERION 7 (unit heuristic bounds): PASS (500 unit DAGs x 3 epsilons)")


def test_criterion_08_nodelay_heuristics():
    rng = random.Random(137)
    checked = 0
    for seed in range(60):
        g = nodelay_graph(80_000 + seed)
        tpc = int(g.total_cloud_time())
        for b in sorted({0, tpc // 2, tpc}):
            out = nodelay_identical_makespan(g, b)
            rep = validate_schedule(g, out.schedule)
            assert rep.valid and rep.cost <= b
            want = oracle_min_makespan(g, b)
            if want is not None and want[0] > 0:
                assert out.makespan <= 2 * want[0]
            checked += 1
    for seed in range(60):
        g = nodelay_graph(81_000 + seed, unit=True)
        tpc = int(g.total_cloud_time())
        for b in sorted({0, tpc // 2, tpc}):
            out = nodelay_unit_exact(g, MIN_MAKESPAN, b)
            assert out.makespan == oracle_min_makespan(g, b)[0]
            checked += 1
        _, chain_len = longest_chain(g)
        for d in sorted({chain_len, chain_len + 2}):
            out = nodelay_unit_exact(g, MIN_COST, d)
            want = oracle_min_cost(g, d)
            assert out.cost == want[0]
            checked += 1
    print("CRITERION 8 (no-delay heuristics): PASS (%d queries)" % checked)


def test_criterion_09_pareto_alpha_domination():
    count = 0
    for g in random_corpus(100, 7, seed_base=139):
        exact = oracle_pareto(g)
        approx = approx_pareto(g, 0.25)
        for p in exact:
            assert any(q.makespan <= 1.25 * p.makespan and q.cost <= 1.25 * p.cost
                       for q in approx), (p.makespan, p.cost)
        for q in approx:
            rep = validate_schedule(g, q.witness)
            assert rep.valid
            assert (rep.makespan, rep.cost) == (q.makespan, q.cost)
        count += 1
    print("CRITERION 9 (Pareto alpha-domination): PASS (%d instances)" % count)


def test_criterion_10_global_soundness_fuzz():
    rng = random.Random(149)
    invocations = 0
    corpus = random_corpus(120, 7, seed_base=151)
    i = 0
    while invocations < 10_000:
        g = corpus[i % len(corpus)]
        i += 1
        tag = classify_shape(g).tag
        tps = int(g.total_server_time())
        tpc = int(g.total_cloud_time())
        d = rng.randint(0, max(0, tps))
        b = rng.randint(0, max(0, tpc))
        eps = rng.choice((0.25, 0.5, 1.0))
        outcomes = []
        res = dyn_prog(g, d)
        if res is not None:
            cost, sched = res
            rep = validate_schedule(g, sched)
            assert rep.valid and rep.cost == cost and rep.makespan <= d
        invocations += 1
        outcomes.append(rounded_min_cost(g, d, eps))
        invocations += 1
        outcomes.append(fptas_min_makespan(g, b, eps))
        invocations += 1
        if tag == CHAIN:
            outcomes.append(dp_chain(g, SolveQuery(MIN_COST, d)))
            outcomes.append(dp_chain(g, SolveQuery(MIN_MAKESPAN, b)))
            invocations += 2
        elif tag == FULLY_PARALLEL:
            outcomes.append(dp_parallel(g, SolveQuery(MIN_COST, d)))
            outcomes.append(dp_parallel(g, SolveQuery(MIN_MAKESPAN, b)))
            invocations += 2
        if extended_chain_decomposition(g) is not None:
            outcomes.append(approx_makespan_extended(g, b, eps))
            invocations += 1
        for out in outcomes:
            if out is None:
                continue
            rep = validate_schedule(g, out.schedule)
            assert rep.valid, rep.violations
            assert (rep.makespan, rep.cost) == (out.makespan, out.cost)
    print("CRITERION 10 (global soundness fuzz): PASS (%d invocations)" % invocations)

import math

import pytest

from svcsched.chain_parallel import MIN_MAKESPAN, SolveQuery, dp_chain
from svcsched.extended_chain import (ASSUME_CMAX, ASSUME_LOCAL_SMALL,
                                     ASSUME_UNIFORM_IN, ExtensionEntry,
                                     approx_makespan_extended,
                                     block_assumption, build_extensions,
                                     fptas_extended_special)
from svcsched.model import (CLOUD, INF, AssumptionViolated, SERVER,
                            ShapeMismatch, validate_schedule)
from svcsched.oracle import oracle_min_makespan

from conftest import make_graph, random_corpus, special_ext_graph


def test_direct_gap_entries(e1):
    entries = build_extensions(e1, "src", "j1", (), horizon=10)
    # server -> cloud pays the cloud time plus the edge delay
    assert ExtensionEntry(1 + 1, SERVER, CLOUD, 1) in entries
    assert ExtensionEntry(2, SERVER, SERVER, 0) in entries
    assert ExtensionEntry(2 + 1, CLOUD, SERVER, 0) in entries
    assert ExtensionEntry(1, CLOUD, CLOUD, 1) in entries


def test_block_entry_forced_server():
    # single block job with ps=1, pc=1 and delays 5/5 between server spine jobs
    g = make_graph(
        {"src": (0, INF), "u": (1, 1), "p": (1, 1), "q": (1, 1), "v": (1, 1), "snk": (0, INF)},
        [("src", "u", 0), ("u", "p", 5), ("u", "q", 5), ("p", "v", 5), ("q", "v", 5),
         ("v", "snk", 0)])
    entries = build_extensions(g, "u", "v", ("p",), horizon=20)
    ss = [e for e in entries if (e.from_loc, e.to_loc) == (SERVER, SERVER)]
    assert any(e.dt == 1 and e.cost == 0 for e in ss)  # cloud needs 11 > 1, so server
    assert not any(e.dt == 0 for e in ss)  # at duration 0 the job fits nowhere


def test_chain_input_equals_chain_dp(e1):
    # on chains the sweep has only direct extensions and scaling clamps to 1
    for b in range(int(e1.total_cloud_time()) + 1):
        want = dp_chain(e1, SolveQuery(MIN_MAKESPAN, b))
        got = approx_makespan_extended(e1, b, 0.5)
        assert got.makespan == want.makespan
        assert got.cost <= b


def test_e1_factor_example(e1):
    opt = oracle_min_makespan(e1, 2)[0]  # 4
    out = approx_makespan_extended(e1, 2, 0.3)
    assert out.cost <= 2
    assert out.makespan <= (2 + 0.3) * opt


def test_full_budget_within_factor():
    for g in random_corpus(10, 8, seed_base=79, shapes=("ExtendedChain",)):
        b = int(g.total_cloud_time())
        opt = oracle_min_makespan(g, b)
        out = approx_makespan_extended(g, b, 0.5)
        if opt is None:
            continue
        assert out is not None
        assert out.cost <= b
        if opt[0] > 0:
            assert out.makespan <= (2 + 0.5) * opt[0]
        else:
            assert out.makespan == 0


def test_budget_strict_and_monotone():
    for g in random_corpus(8, 8, seed_base=83, shapes=("ExtendedChain",)):
        tpc = int(g.total_cloud_time())
        prev = None
        for b in range(0, tpc + 1, max(1, tpc // 4)):
            out = approx_makespan_extended(g, b, 0.5)
            assert out is not None
            assert out.cost <= b  # never relaxed
            rep = validate_schedule(g, out.schedule)
            assert rep.valid and rep.cost == out.cost
            if prev is not None:
                assert out.makespan <= prev
            prev = out.makespan


def test_shape_mismatch(diamond_unit):
    g = make_graph(
        {"src": (0, INF), "a": (1, 1), "b": (1, 1), "snk": (0, INF)},
        [("src", "a", 1), ("src", "b", 1), ("a", "snk", 1), ("b", "snk", 1), ("a", "b", 1)])
    with pytest.raises(ShapeMismatch):
        approx_makespan_extended(g, 5, 0.5)


def test_assumption_predicates():
    g = special_ext_graph(5, "uniform")
    from svcsched.model import extended_chain_decomposition
    spine, blocks = extended_chain_decomposition(g)
    for i, block in enumerate(blocks):
        if block:
            assert block_assumption(g, spine[i], spine[i + 1], block, 1) is not None

    # uniform incoming delays, mixed outgoing -> assumption 3
    g = make_graph(
        {"src": (0, INF), "u": (1, 1), "p": (1, 2), "q": (2, 1), "v": (1, 1), "snk": (0, INF)},
        [("src", "u", 0), ("u", "p", 3), ("u", "q", 3), ("p", "v", 1), ("q", "v", 7),
         ("v", "snk", 0)])
    from svcsched.model import extended_chain_decomposition
    spine, blocks = extended_chain_decomposition(g)
    idx = next(i for i, b in enumerate(blocks) if b)
    assert block_assumption(g, spine[idx], spine[idx + 1], blocks[idx], 0) == ASSUME_UNIFORM_IN


def test_assumption_violated():
    g = make_graph(
        {"src": (0, INF), "a": (1, 1), "b": (1, 1), "snk": (0, INF)},
        [("src", "a", 5), ("src", "b", 0), ("a", "snk", 0), ("b", "snk", 5)])
    with pytest.raises(AssumptionViolated):
        fptas_extended_special(g, 2, 0.5, c_max=1)


def test_zero_delay_block_special_case_matches_oracle():
    # all block delays zero: the c_max assumption applies with c_max = 0
    g = make_graph(
        {"src": (0, INF), "a": (2, 1), "b": (3, 2), "c": (1, 1), "snk": (0, INF)},
        [("src", "a", 0), ("src", "b", 0), ("a", "c", 0), ("b", "c", 0), ("c", "snk", 0)])
    tpc = int(g.total_cloud_time())
    for budget in range(tpc + 1):
        opt = oracle_min_makespan(g, budget)[0]
        out = fptas_extended_special(g, budget, 0.5, c_max=0)
        assert out.cost <= budget
        assert out.makespan <= math.ceil(1.5 * opt)


def test_special_case_within_one_plus_eps():
    for flavor in ("uniform", "local", "cmax"):
        for seed in range(6):
            g = special_ext_graph(1000 + seed * 7 + hash(flavor) % 97, flavor)
            if len(g.jobs) > 9:
                continue
            b = int(g.total_cloud_time()) // 2
            opt = oracle_min_makespan(g, b)
            try:
                out = fptas_extended_special(g, b, 0.5, c_max=1)
            except AssumptionViolated:
                continue
            if opt is None:
                continue
            assert out is not None
            assert out.cost <= b
            assert out.makespan <= math.ceil(1.5 * opt[0]) if opt[0] else out.makespan == 0

import random

import pytest

from svcsched.generators import (CnfSpec, KnapsackSpec, RandomSpec, SHAPES,
                                 gen_from_knapsack, gen_from_partition,
                                 gen_random, gen_unit_from_3sat, parse_dimacs)
from svcsched.model import (CHAIN, EXTENDED_CHAIN, FULLY_PARALLEL, INF,
                            classify_shape, validate_instance)
from svcsched.oracle import oracle_decide


def test_knapsack_example_values():
    gen = gen_from_knapsack(KnapsackSpec(items=((3, 2), (2, 3)), capacity=3, threshold=3))
    g = gen.graph
    assert [g.p_server[j] for j in ("it1", "it2")] == [5, 5]
    assert [g.p_cloud[j] for j in ("it1", "it2")] == [2, 3]
    assert (gen.deadline, gen.budget) == (8, 2)
    assert classify_shape(g).tag == CHAIN
    assert oracle_decide(g, gen.deadline, gen.budget) is not None


def test_knapsack_pick_everything():
    items = ((1, 2), (2, 1))
    gen = gen_from_knapsack(KnapsackSpec(items=items, capacity=3, threshold=3))
    assert gen.budget == 0
    assert oracle_decide(gen.graph, gen.deadline, gen.budget) is not None


def test_knapsack_threshold_too_large_rejected():
    with pytest.raises(ValueError):
        gen_from_knapsack(KnapsackSpec(items=((1, 1),), capacity=1, threshold=2))


def test_partition_examples():
    gen = gen_from_partition([1, 2, 3])
    assert (gen.deadline, gen.budget) == (3, 3)
    assert not gen.metadata["odd_total"]
    assert oracle_decide(gen.graph, 3, 3) is not None

    gen = gen_from_partition([1, 1, 1])
    assert (gen.deadline, gen.budget) == (1, 1)
    assert gen.metadata["odd_total"]
    assert oracle_decide(gen.graph, 1, 1) is None

    gen = gen_from_partition([])
    assert oracle_decide(gen.graph, 0, 0) is not None


def test_sat_instance_m1_n1_counts():
    gen = gen_unit_from_3sat(CnfSpec(1, ((1, 1, 1),)))
    g = gen.graph
    assert gen.deadline == 14
    assert len(g.jobs) == 38
    assert gen.budget == 38 - (2 + 1 + 1) == 34
    roles = gen.metadata["roles"]
    assert sum(1 for r in roles.values() if r == "anchor") == 2 * (gen.deadline - 2) == 24
    assert validate_instance(g).valid


def test_sat_connection_chain_slack():
    rng = random.Random(3)
    for _ in range(10):
        m = rng.randint(1, 4)
        n = rng.randint(1, 3)
        clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, m) for _ in range(3))
                        for _ in range(n))
        gen = gen_unit_from_3sat(CnfSpec(m, clauses))
        assert validate_instance(gen.graph).valid
        for ch in gen.metadata["chains"]:
            window = ch["end_anchor"] - ch["start_anchor"] - 1
            assert window - ch["length"] == 1


def test_cnf_spec_validation():
    with pytest.raises(ValueError):
        CnfSpec(2, ((1, 2),))
    with pytest.raises(ValueError):
        CnfSpec(2, ((1, 2, 3),))


def test_parse_dimacs():
    spec = parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n")
    assert spec.num_vars == 3
    assert spec.clauses == ((1, -2, 3), (-1, 2, -3))


def test_random_determinism():
    a = gen_random(RandomSpec(shape="Chain", n=5, seed=7))
    b = gen_random(RandomSpec(shape="Chain", n=5, seed=7))
    assert a == b


def test_random_shapes():
    assert classify_shape(gen_random(RandomSpec(shape="FullyParallel", n=6, seed=1))).tag \
        == FULLY_PARALLEL
    tag = classify_shape(gen_random(RandomSpec(shape="ExtendedChain", n=12, seed=1))).tag
    assert tag in (CHAIN, EXTENDED_CHAIN)


def test_all_random_instances_validate():
    for shape in SHAPES:
        for seed in range(10):
            g = gen_random(RandomSpec(shape=shape, n=2 + seed, seed=seed))
            rep = validate_instance(g)
            assert rep.valid, (shape, seed, rep.violations)
            if shape == "UnitDag":
                assert all(g.p_server[j] == 1 == g.p_cloud[j] for j in g.middle_jobs)
                assert all(c == 1 for _, _, c in g.edges)

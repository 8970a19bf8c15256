"""Command-line front end: solve, verify, generate, pareto, analyze, bench.

Exit codes: 0 success, 1 infeasible or failed verification, 2 input error,
3 state/size cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import files
from .chain_parallel import (MIN_COST, MIN_MAKESPAN, SolveOutcome, SolveQuery,
                             dp_chain, dp_parallel, fptas_chain_parallel)
from .extended_chain import approx_makespan_extended, fptas_extended_special
from .general_dp import approx_pareto, dyn_prog, fptas_min_makespan, rounded_min_cost
from .generators import (CnfSpec, KnapsackSpec, RandomSpec, SHAPES,
                         gen_from_knapsack, gen_from_partition,
                         gen_unit_from_3sat, gen_random, parse_dimacs)
from .heuristics import nodelay_identical_makespan, nodelay_unit_exact, unit_schedule
from .model import (CHAIN, FULLY_PARALLEL, EXTENDED_CHAIN, InstanceTooLarge,
                    SchedulingError, StateSpaceExceeded, classify_shape,
                    compute_phi, longest_chain, validate_instance,
                    validate_schedule, zero_makespan_schedule)
from .oracle import oracle_decide, oracle_min_cost, oracle_min_makespan, oracle_pareto
from .tardy import TardyJob, solve_wntj

ENGINES = ("auto", "oracle", "chain", "parallel", "extchain", "general", "unit", "nodelay")

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2
EXIT_CAP = 3


def _load_valid_instance(path):
    g = files.load_instance(path)
    report = validate_instance(g)
    if not report.valid:
        raise ValueError("invalid instance %s: %s" % (path, "; ".join(
            "%s (%s)" % v for v in report.violations)))
    return g


def _auto_engine(g, mode):
    tag = classify_shape(g).tag
    if tag == CHAIN:
        return "chain"
    if tag == FULLY_PARALLEL:
        return "parallel"
    if tag == EXTENDED_CHAIN and mode == MIN_MAKESPAN:
        return "extchain"
    return "general"


def _solve_with_engine(g, engine, mode, bound, epsilon, special_case):
    if engine == "oracle":
        if mode == MIN_COST:
            res = oracle_min_cost(g, bound)
            if res is None:
                return None
            cost, sched = res
            rep = validate_schedule(g, sched)
            return SolveOutcome(sched, rep.makespan, int(rep.cost), _exact())
        res = oracle_min_makespan(g, bound)
        if res is None:
            return None
        _, sched = res
        rep = validate_schedule(g, sched)
        return SolveOutcome(sched, rep.makespan, int(rep.cost), _exact())
    if engine == "chain":
        if epsilon is not None:
            return fptas_chain_parallel(g, mode, bound, epsilon)
        return dp_chain(g, SolveQuery(mode, bound))
    if engine == "parallel":
        if epsilon is not None:
            return fptas_chain_parallel(g, mode, bound, epsilon)
        return dp_parallel(g, SolveQuery(mode, bound))
    if engine == "extchain":
        if mode != MIN_MAKESPAN:
            raise ValueError("engine extchain supports only minmakespan")
        eps = 0.5 if epsilon is None else epsilon
        if special_case:
            return fptas_extended_special(g, bound, eps)
        return approx_makespan_extended(g, bound, eps)
    if engine == "general":
        if mode == MIN_COST:
            if epsilon is not None:
                return rounded_min_cost(g, bound, epsilon)
            res = dyn_prog(g, bound)
            if res is None:
                return None
            cost, sched = res
            rep = validate_schedule(g, sched)
            return SolveOutcome(sched, rep.makespan, int(rep.cost), _exact())
        eps = 0.5 if epsilon is None else epsilon
        return fptas_min_makespan(g, bound, eps)
    if engine == "unit":
        if mode != MIN_COST:
            raise ValueError("engine unit minimizes cost under a deadline")
        eps = 0.5 if epsilon is None else epsilon
        return unit_schedule(g, bound, eps)
    if engine == "nodelay":
        if all(g.p_server[j] == 1 for j in g.middle_jobs):
            return nodelay_unit_exact(g, mode, bound)
        if mode != MIN_MAKESPAN:
            raise ValueError("engine nodelay minimizes makespan under a budget")
        return nodelay_identical_makespan(g, bound)
    raise ValueError("unknown engine %r" % (engine,))


def _exact():
    from .chain_parallel import EXACT
    return EXACT


def _guarantee_obj(guarantee):
    obj = {"kind": guarantee.kind}
    if guarantee.factor is not None:
        obj["factor"] = guarantee.factor
    if guarantee.augmentation is not None:
        obj["augmentation"] = guarantee.augmentation
    return obj


def cmd_solve(args):
    g = _load_valid_instance(args.instance)
    mode = MIN_COST if args.mode == "mincost" else MIN_MAKESPAN
    bound = args.deadline if mode == MIN_COST else args.budget
    if bound is None:
        print("mode %s requires --%s" % (args.mode, "deadline" if mode == MIN_COST else "budget"),
              file=sys.stderr)
        return EXIT_INPUT
    engine = args.engine
    if engine == "auto":
        engine = _auto_engine(g, mode)
    outcome = _solve_with_engine(g, engine, mode, bound, args.epsilon, args.special_case)
    if outcome is None:
        print("infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    extra = {"engine": engine, "guarantee": _guarantee_obj(outcome.guarantee)}
    text = files.dumps_schedule(outcome.schedule, outcome.makespan, outcome.cost, extra)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args):
    g = _load_valid_instance(args.instance)
    sched, makespan, cost = files.load_schedule(args.schedule)
    report = validate_schedule(g, sched)
    problems = list(report.violations)
    if report.valid:
        if makespan != report.makespan:
            problems.append(("BadMetadata", "makespan field %d, recomputed %d"
                             % (makespan, report.makespan)))
        if cost != report.cost:
            problems.append(("BadMetadata", "cost field %d, recomputed %d"
                             % (cost, int(report.cost))))
    if problems:
        for kind, detail in problems:
            print("%s: %s" % (kind, detail), file=sys.stderr)
        return EXIT_INFEASIBLE
    print("ok: makespan=%d cost=%d" % (report.makespan, int(report.cost)))
    return EXIT_OK


def cmd_generate(args):
    meta_extra = {}
    if args.source == "knapsack":
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        gen = gen_from_knapsack(KnapsackSpec(
            items=tuple((int(w), int(v)) for w, v in spec["items"]),
            capacity=int(spec["capacity"]), threshold=int(spec["threshold"])))
    elif args.source == "partition":
        spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        gen = gen_from_partition([int(v) for v in spec["values"]])
    elif args.source == "cnf":
        cnf = parse_dimacs(Path(args.spec).read_text(encoding="utf-8"))
        gen = gen_unit_from_3sat(cnf)
    elif args.source == "random":
        g = gen_random(RandomSpec(shape=args.shape, n=args.n, max_p=args.max_p,
                                  max_c=args.max_c, seed=args.seed))
        gen = None
    else:
        raise ValueError("unknown generator %r" % (args.source,))
    if gen is not None:
        g = gen.graph
        meta_extra = {"deadline": gen.deadline, "budget": gen.budget, **gen.metadata}
    files.save_instance(args.output, g)
    meta_path = str(args.output) + ".meta.json"
    Path(meta_path).write_text(json.dumps(meta_extra, indent=2, default=str) + "\n",
                               encoding="utf-8")
    print("wrote %s and %s" % (args.output, meta_path))
    return EXIT_OK


def cmd_pareto(args):
    g = _load_valid_instance(args.instance)
    if args.engine == "oracle":
        points = oracle_pareto(g)
    else:
        points = approx_pareto(g, args.alpha)
    obj = [{"makespan": p.makespan, "cost": p.cost} for p in points]
    text = json.dumps(obj, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(args):
    g = _load_valid_instance(args.instance)
    shape = classify_shape(g)
    print("jobs: %d" % len(g.jobs))
    print("shape: %s" % shape.tag)
    if shape.spine:
        print("spine: %s" % " -> ".join(shape.spine))
        blocks = [b for b in shape.blocks if b]
        print("blocks: %d" % len(blocks))
    try:
        print("phi: %d" % compute_phi(g))
    except StateSpaceExceeded as exc:
        print("phi: cap exceeded (%s)" % exc)
    path, length = longest_chain(g)
    print("longest chain: %s (length %s)" % (" -> ".join(path), length))
    print("zero makespan possible: %s" % (zero_makespan_schedule(g) is not None))
    return EXIT_OK


def cmd_bench(args):
    paths = sorted(Path(args.directory).glob("*.json"))
    paths = [p for p in paths if not p.name.endswith(".meta.json")]
    engines = args.engines.split(",")
    mode = MIN_COST if args.mode == "mincost" else MIN_MAKESPAN
    rows = []
    for path in paths:
        try:
            g = _load_valid_instance(path)
        except (ValueError, KeyError):
            continue
        if mode == MIN_COST:
            bound = max(0, int(args.bound_frac * g.total_server_time()))
        else:
            bound = max(0, int(args.bound_frac * g.total_cloud_time()))
        opt = None
        if len(g.jobs) <= args.oracle_cap:
            res = (oracle_min_cost(g, bound) if mode == MIN_COST
                   else oracle_min_makespan(g, bound))
            if res is not None:
                opt = res[0]
        for engine in engines:
            resolved = _auto_engine(g, mode) if engine == "auto" else engine
            t0 = time.perf_counter()
            try:
                outcome = _solve_with_engine(g, resolved, mode, bound, args.epsilon, False)
            except SchedulingError:
                continue
            except ValueError:
                continue
            ms = (time.perf_counter() - t0) * 1000.0
            if outcome is None:
                rows.append([path.name, engine, "", "", opt if opt is not None else "",
                             "", "%.2f" % ms])
                continue
            value = outcome.cost if mode == MIN_COST else outcome.makespan
            ratio = ""
            if opt not in (None, "") and opt > 0:
                ratio = "%.4f" % (value / opt)
            rows.append([path.name, engine, outcome.makespan, outcome.cost,
                         opt if opt is not None else "", ratio, "%.2f" % ms])
    rows.sort(key=lambda r: (r[0], r[1]))
    out = sys.stdout if not args.output else open(args.output, "w", newline="", encoding="utf-8")
    writer = csv.writer(out)
    writer.writerow(["instance", "engine", "makespan", "cost", "oracleOpt", "ratio", "runtime-ms"])
    writer.writerows(rows)
    if args.output:
        out.close()
    return EXIT_OK


def cmd_debug_wntj(args):
    spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    jobs = [TardyJob(p=int(rec["p"]),
                     w=(float("inf") if rec["w"] == "inf" else int(rec["w"])),
                     d=int(rec["d"])) for rec in spec["jobs"]]
    weight, early = solve_wntj(jobs)
    print(json.dumps({"lateWeight": "inf" if weight == float("inf") else int(weight),
                      "early": sorted(early)}))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="svcsched",
                                     description="Server/cloud DAG scheduling toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--mode", choices=("mincost", "minmakespan"), required=True)
    p.add_argument("--deadline", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--special-case", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a schedule file against an instance")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="emit an instance")
    p.add_argument("--from", dest="source", required=True,
                   choices=("knapsack", "partition", "cnf", "random"))
    p.add_argument("--spec", help="JSON spec (knapsack/partition) or DIMACS file (cnf)")
    p.add_argument("--shape", choices=SHAPES, default="LayeredDag")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--max-p", type=int, default=8)
    p.add_argument("--max-c", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("pareto", help="approximate or enumerate the Pareto front")
    p.add_argument("instance")
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--engine", choices=("approx", "oracle"), default="approx")
    p.add_argument("--output")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("analyze", help="print structural facts about an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="sweep a directory of instances")
    p.add_argument("directory")
    p.add_argument("--engines", default="auto")
    p.add_argument("--mode", choices=("mincost", "minmakespan"), default="minmakespan")
    p.add_argument("--bound-frac", type=float, default=0.5)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--oracle-cap", type=int, default=10)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("debug", help="debug subcommands")
    dsub = p.add_subparsers(dest="debug_command", required=True)
    d = dsub.add_parser("wntj", help="solve a weighted-tardy-jobs instance")
    d.add_argument("spec")
    d.set_defaults(func=cmd_debug_wntj)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateSpaceExceeded, InstanceTooLarge) as exc:
        print("cap exceeded: %s" % exc, file=sys.stderr)
        return EXIT_CAP
    except SchedulingError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

"""Scheduling a task DAG across one sequential server machine and a
pay-per-use cloud, with cross-context communication delays."""

from .model import (CHAIN, CLOUD, EXTENDED_CHAIN, FULLY_PARALLEL, GENERAL, INF,
                    AssumptionViolated, InstanceTooLarge, Schedule,
                    SchedulingError, ShapeClass, ShapeMismatch,
                    StateSpaceExceeded, TaskGraph, SERVER, all_server_schedule,
                    asap_schedule, classify_shape, compute_phi,
                    extended_chain_decomposition, longest_chain,
                    validate_instance, validate_schedule,
                    zero_makespan_schedule)
from .chain_parallel import (MIN_COST, MIN_MAKESPAN, Guarantee, SolveOutcome,
                             SolveQuery, dp_chain, dp_parallel,
                             fptas_chain_parallel)
from .extended_chain import (ExtensionEntry, approx_makespan_extended,
                             build_extensions, fptas_extended_special)
from .general_dp import (DPState, ScaledInstance, approx_pareto, dyn_prog,
                         fptas_min_makespan, rounded_min_cost)
from .generators import (CnfSpec, GeneratedInstance, KnapsackSpec, RandomSpec,
                         gen_from_knapsack, gen_from_partition, gen_random,
                         gen_unit_from_3sat, parse_dimacs)
from .heuristics import (nodelay_identical_makespan, nodelay_unit_exact,
                         unit_schedule)
from .oracle import (ParetoPoint, oracle_decide, oracle_min_cost,
                     oracle_min_makespan, oracle_pareto)
from .tardy import ReleaseJob, TardyJob, solve_wntj, solve_wntj_release

__all__ = [name for name in dir() if not name.startswith("_")]

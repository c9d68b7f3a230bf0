"""(R,s,S) inventory policy computation for the non-stationary
stochastic lot-sizing problem with fixed review and ordering costs.

Main entry points:

* :func:`solve_kconvex` / :func:`solve_plain` -- the approximate-SDP
  heuristic (accelerated and reference sweeps, identical output);
* :func:`enumerate_optimal` -- exact baseline over all review schedules;
* :func:`expected_cost` / :func:`simulate` -- policy evaluation;
* :mod:`rss_policy.testbed` -- benchmark instance generators.
"""

from .costs import CostParams, CycleCostEngine, holding_penalty
from .demand import (
    CumulativeDemandCache,
    DemandPmf,
    DemandSpec,
    convolve,
    discretize,
    point_mass,
)
from .evaluate import EvalReport, expected_cost, optimality_gap, simulate
from .exact import (
    EnumerationResult,
    HorizonCapError,
    ReviewSchedule,
    ScarfResult,
    enumerate_optimal,
    iter_schedules,
    scarf_fixed_R,
)
from .model import Instance, Policy, PolicyReview
from .serialize import (
    SchemaError,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_policy,
    policy_from_dict,
    policy_to_dict,
    save_instance,
)
from .solver import (
    InventoryGrid,
    SolveContext,
    SolveStats,
    ValueTables,
    build_grid,
    extract_policy,
    no_order_curve,
    solve_kconvex,
    solve_lost_sales,
    solve_plain,
)
from .testbed import PatternSpec, gen_analysis, gen_scalability, pattern_means

__version__ = "0.1.0"

__all__ = [
    "CostParams",
    "CumulativeDemandCache",
    "CycleCostEngine",
    "DemandPmf",
    "DemandSpec",
    "EnumerationResult",
    "EvalReport",
    "HorizonCapError",
    "Instance",
    "InventoryGrid",
    "PatternSpec",
    "Policy",
    "PolicyReview",
    "ReviewSchedule",
    "ScarfResult",
    "SchemaError",
    "SolveContext",
    "SolveStats",
    "ValueTables",
    "build_grid",
    "convolve",
    "discretize",
    "enumerate_optimal",
    "expected_cost",
    "extract_policy",
    "gen_analysis",
    "gen_scalability",
    "holding_penalty",
    "instance_from_dict",
    "instance_to_dict",
    "iter_schedules",
    "load_instance",
    "load_policy",
    "no_order_curve",
    "optimality_gap",
    "pattern_means",
    "point_mass",
    "policy_from_dict",
    "policy_to_dict",
    "save_instance",
    "scarf_fixed_R",
    "simulate",
    "solve_kconvex",
    "solve_lost_sales",
    "solve_plain",
]

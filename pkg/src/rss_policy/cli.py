"""Command-line interface: solve instances, evaluate policies, run
benchmark campaigns, and generate testbed instance files.

Exit codes: 0 success, 2 input error, 3 capability error (exact solver
above its horizon cap), 4 output I/O error. ``RSS_THREADS`` caps the
benchmark worker count (default 1, sequential).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

from .evaluate import expected_cost, optimality_gap, simulate
from .exact import DEFAULT_SCHEDULE_CAP, HorizonCapError, enumerate_optimal
from .model import Instance, Policy
from .serialize import (
    SchemaError,
    instance_to_dict,
    load_instance,
    load_policy,
    policy_to_dict,
    save_instance,
)
from .solver import SolveContext, extract_policy, solve_kconvex, solve_lost_sales, solve_plain
from .testbed import gen_analysis, gen_scalability

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPABILITY = 3
EXIT_IO = 4

REPORT_COLUMNS = [
    "label",
    "solver",
    "expected_cost",
    "optimality_gap_pct",
    "n_reviews",
    "wall_time_ms",
    "states_evaluated",
]

SUMMARY_COLUMNS = [
    "factor",
    "level",
    "solver",
    "mean_gap_pct",
    "pct_non_optimal",
    "non_optimal_mean_gap_pct",
    "mean_time_ms",
    "mean_reviews",
]

_NON_OPTIMAL_GAP = 1e-8


def _solve_with(name: str, instance: Instance, ctx: SolveContext):
    """Run one solver; returns (policy, cost, states_evaluated)."""
    if name == "exact":
        result = enumerate_optimal(instance, context=ctx)
        return result.policy, result.cost, result.stats.states_evaluated
    if name == "plain":
        tables = solve_plain(instance, context=ctx)
    elif name == "kconvex":
        tables = solve_kconvex(instance, context=ctx)
    elif name == "lost_sales":
        tables = solve_lost_sales(instance, context=ctx)
    else:
        raise ValueError(f"unknown solver {name!r}")
    policy = extract_policy(tables, instance)
    return policy, tables.value(1, instance.I0), tables.stats.states_evaluated


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    if instance.beta < 1.0 and args.solver in ("plain", "kconvex"):
        raise SchemaError("instances with beta < 1 need --solver lost_sales")
    ctx = SolveContext(instance, tail_eps=args.tail_eps, quantile_eps=args.grid_eps)
    policy, cost, _ = _solve_with(args.solver, instance, ctx)
    doc = policy_to_dict(policy, expected_cost=cost)
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    policy = load_policy(args.policy, horizon=instance.T)
    ctx = SolveContext(instance, tail_eps=args.tail_eps, quantile_eps=args.grid_eps)
    doc: dict[str, Any] = {"expected_cost": expected_cost(instance, policy, context=ctx)}
    if args.simulate is not None:
        if args.simulate < 1:
            raise SchemaError("--simulate needs at least one path")
        report = simulate(instance, policy, args.simulate, args.seed, context=ctx)
        doc.update(
            mc_mean=report.mc_mean,
            mc_halfwidth_95=report.mc_halfwidth_95,
            n_paths=report.n_paths,
            seed=report.seed,
        )
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


# ----------------------------------------------------------------------
# Benchmark campaign
# ----------------------------------------------------------------------

def _benchmark_instance(task: tuple) -> list[dict[str, Any]]:
    """Solve one instance with each requested solver (worker-safe)."""
    instance, solvers, reps, oracle, factors = task
    ctx = SolveContext(instance)
    oracle_cost: Optional[float] = None
    if oracle:
        oracle_cost = enumerate_optimal(instance, context=ctx).cost
    rows = []
    for name in solvers:
        times = []
        policy = cost = states = None
        for _ in range(reps):
            t0 = time.perf_counter()
            policy, cost, states = _solve_with(name, instance, ctx)
            times.append(time.perf_counter() - t0)
        gap = None
        if name == "exact":
            gap = 0.0
            if oracle_cost is None:
                oracle_cost = cost
        elif oracle_cost is not None:
            gap = optimality_gap(cost, oracle_cost)
        rows.append(
            {
                "label": instance.label,
                "solver": name,
                "expected_cost": cost,
                "optimality_gap_pct": None if gap is None else 100.0 * gap,
                "n_reviews": policy.n_reviews,
                "wall_time_ms": 1000.0 * statistics.median(times),
                "states_evaluated": states,
                "T": instance.T,
                "factors": factors,
            }
        )
    return rows


def _analysis_factors(instance: Instance) -> dict[str, str]:
    first = instance.demand[0]
    sigma = "poisson" if first.kind == "poisson" else f"{first.cv:g}"
    pattern = instance.label.rsplit("-", 1)[1] if instance.label else ""
    return {
        "K": f"{instance.params.K:g}",
        "W": f"{instance.params.W:g}",
        "sigma": sigma,
        "pattern": pattern,
    }


def _write_summary(path: Path, rows: list[dict[str, Any]]) -> None:
    """Per-factor aggregation in the benchmark-table layout."""
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        factors = ("K", "W", "sigma", "pattern")
        solvers = sorted({r["solver"] for r in rows})
        for factor in factors:
            levels = sorted({r["factors"][factor] for r in rows if r["factors"]})
            for level in levels:
                for solver in solvers:
                    sel = [
                        r
                        for r in rows
                        if r["solver"] == solver
                        and r["factors"]
                        and r["factors"][factor] == level
                    ]
                    if not sel:
                        continue
                    gaps = [r["optimality_gap_pct"] for r in sel]
                    have_gaps = all(g is not None for g in gaps)
                    non_opt = (
                        [g for g in gaps if g > 100.0 * _NON_OPTIMAL_GAP]
                        if have_gaps
                        else []
                    )
                    writer.writerow(
                        [
                            factor,
                            level,
                            solver,
                            f"{statistics.mean(gaps):.4f}" if have_gaps else "",
                            f"{100.0 * len(non_opt) / len(sel):.2f}" if have_gaps else "",
                            f"{statistics.mean(non_opt):.4f}" if non_opt else "",
                            f"{statistics.mean(r['wall_time_ms'] for r in sel):.2f}",
                            f"{statistics.mean(r['n_reviews'] for r in sel):.2f}",
                        ]
                    )


def cmd_benchmark(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    horizons = list(range(args.t_min, args.t_max + 1))
    tasks = []
    for T in horizons:
        if args.suite == "scalability":
            batch = gen_scalability(T, args.n, seed=args.seed + T)
            factor_fn = lambda inst: {}
        else:
            if T not in (10, 20):
                continue
            batch = gen_analysis(T, seed=args.seed)
            factor_fn = _analysis_factors
        for instance in batch:
            oracle = (not args.skip_oracle) and instance.T <= args.exact_cap
            tasks.append((instance, tuple(solvers), args.reps, oracle, factor_fn(instance)))
    tasks.sort(key=lambda task: task[0].label or "")

    workers = max(1, int(os.environ.get("RSS_THREADS", "1")))
    all_rows: list[dict[str, Any]] = []
    try:
        with (out_dir / "report.csv").open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, extrasaction="ignore")
            writer.writeheader()
            fh.flush()
            if workers > 1 and len(tasks) > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    futures = [pool.submit(_benchmark_instance, task) for task in tasks]
                    results = (f.result() for f in futures)
                    for rows in results:
                        for row in rows:
                            writer.writerow(_format_row(row))
                        fh.flush()
                        all_rows.extend(rows)
            else:
                for task in tasks:
                    rows = _benchmark_instance(task)
                    for row in rows:
                        writer.writerow(_format_row(row))
                    fh.flush()
                    all_rows.extend(rows)
        for solver in solvers:
            with (out_dir / f"times_{solver}.csv").open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["T", "median_seconds"])
                for T in horizons:
                    sel = [
                        r["wall_time_ms"] / 1000.0
                        for r in all_rows
                        if r["solver"] == solver and r["T"] == T
                    ]
                    if sel:
                        writer.writerow([T, f"{statistics.median(sel):.6f}"])
        if args.suite == "analysis" and all_rows:
            _write_summary(out_dir / "summary.csv", all_rows)
    except OSError as exc:
        print(f"write failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _format_row(row: dict[str, Any]) -> dict[str, Any]:
    out = {k: row[k] for k in REPORT_COLUMNS}
    if out["optimality_gap_pct"] is None:
        out["optimality_gap_pct"] = ""
    else:
        out["optimality_gap_pct"] = f"{out['optimality_gap_pct']:.6f}"
    out["expected_cost"] = f"{out['expected_cost']:.6f}"
    out["wall_time_ms"] = f"{out['wall_time_ms']:.3f}"
    if out["states_evaluated"] is None:
        out["states_evaluated"] = ""
    return out


def cmd_gen(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.suite == "scalability":
            batch = gen_scalability(args.t, args.n, args.seed)
        else:
            batch = gen_analysis(args.t, seed=args.seed)
        for instance in batch:
            save_instance(instance, out_dir / f"{instance.label}.json")
    except OSError as exc:
        print(f"write failure: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(batch)} instances to {out_dir}")
    return EXIT_OK


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rss-policy",
        description="(R,s,S) policy solvers for non-stationary stochastic lot sizing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--grid-eps", type=float, default=1e-5,
                       help="tail mass excluded when sizing the inventory grid")
        p.add_argument("--tail-eps", type=float, default=1e-6,
                       help="tail mass cut when discretizing demand")
        p.add_argument("--seed", type=int, default=0)

    p_solve = sub.add_parser("solve", help="compute a policy for an instance file")
    p_solve.add_argument("instance")
    p_solve.add_argument("--solver", choices=["plain", "kconvex", "exact", "lost_sales"],
                         default="kconvex")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_eval = sub.add_parser("evaluate", help="evaluate a policy file on an instance")
    p_eval.add_argument("instance")
    p_eval.add_argument("--policy", required=True)
    p_eval.add_argument("--simulate", type=int, default=None, metavar="N",
                        help="also run a Monte-Carlo estimate with N paths")
    common(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_bench = sub.add_parser("benchmark", help="run a benchmark campaign")
    p_bench.add_argument("suite", choices=["scalability", "analysis"])
    p_bench.add_argument("--t-min", type=int, required=True)
    p_bench.add_argument("--t-max", type=int, required=True)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--solvers", default="plain,kconvex")
    p_bench.add_argument("--n", type=int, default=100,
                         help="instances per horizon (scalability suite)")
    p_bench.add_argument("--reps", type=int, default=1,
                         help="timing repetitions; the median is reported")
    p_bench.add_argument("--exact-cap", type=int, default=DEFAULT_SCHEDULE_CAP)
    p_bench.add_argument("--skip-oracle", action="store_true",
                         help="do not run the exact oracle for gap columns")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=cmd_benchmark)

    p_gen = sub.add_parser("gen", help="write generated instance files")
    p_gen.add_argument("suite", choices=["scalability", "analysis"])
    p_gen.add_argument("--t", type=int, required=True)
    p_gen.add_argument("--n", type=int, default=100)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HorizonCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (SchemaError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

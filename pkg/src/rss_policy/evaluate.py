"""Analytic and Monte-Carlo evaluation of fixed (R,s,S) policies.

The analytic route recurses backward over the policy's review cycles on
the same inventory grid (and with the same boundary clamping) the
solvers use, so a solver's reported cost and the evaluator's answer for
its extracted policy agree to floating-point noise; any larger mismatch
signals a bug rather than tolerance slack. The Monte-Carlo route samples
demand trajectories from the same discretized pmfs and provides an
independent stochastic check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm

from .model import Instance, Policy
from .solver import SolveContext, _cycle_value_fn


@dataclass(frozen=True)
class EvalReport:
    """Analytic cost next to a Monte-Carlo estimate of the same policy."""

    expected_cost: float
    mc_mean: float
    mc_halfwidth_95: float
    n_paths: int
    seed: int


def _check_policy(instance: Instance, policy: Policy) -> None:
    if policy.horizon != instance.T:
        raise ValueError(
            f"policy horizon {policy.horizon} does not match instance horizon {instance.T}"
        )


def expected_cost(
    instance: Instance,
    policy: Policy,
    *,
    context: Optional[SolveContext] = None,
    tail_eps: float = 1e-6,
    quantile_eps: float = 1e-5,
) -> float:
    """Exact expected cost of the policy under the discretized demand.

    At each review the fixed decision rule applies: order up to the
    order-up-to level iff the opening inventory is below the reorder
    level. Full backlogging is assumed.
    """
    _check_policy(instance, policy)
    ctx = context if context is not None else SolveContext(
        instance, tail_eps=tail_eps, quantile_eps=quantile_eps
    )
    grid = ctx.grid
    p = ctx.params
    future = np.zeros(grid.size)
    for review in reversed(policy.reviews):
        fval = _cycle_value_fn(ctx, review.period, review.cycle, future)
        table = np.empty(grid.size)
        for i in range(grid.min_inv, grid.max_inv + 1):
            table[i - grid.min_inv] = p.W + fval(i)
        if review.reorder > grid.min_inv:
            order_value = (p.W + p.K) + fval(min(review.order_up_to, grid.max_inv))
            table[: grid.index(review.reorder)] = order_value
        future = table
    return float(future[grid.index(instance.I0)])


def _sample_demands(
    ctx: SolveContext, n_paths: int, rng: np.random.Generator, continuous: bool
) -> np.ndarray:
    """(n_paths, T) demand draws; inverse-CDF from a single uniform matrix
    so path i is reproducible independently of batching."""
    T = ctx.instance.T
    u = rng.random((n_paths, T))
    out = np.empty((n_paths, T))
    for t in range(1, T + 1):
        spec = ctx.instance.demand[t - 1]
        if continuous and spec.kind == "normal" and spec.sigma > 0:
            out[:, t - 1] = np.maximum(
                0.0, spec.mean + spec.sigma * norm.ppf(u[:, t - 1])
            )
        else:
            pmf = ctx.demand.period(t)
            idx = np.searchsorted(pmf.cdf(), u[:, t - 1], side="left")
            out[:, t - 1] = pmf.offset + np.minimum(idx, len(pmf) - 1)
    return out


def simulate(
    instance: Instance,
    policy: Policy,
    n_paths: int,
    seed: int,
    *,
    context: Optional[SolveContext] = None,
    continuous: bool = False,
    tail_eps: float = 1e-6,
    quantile_eps: float = 1e-5,
) -> EvalReport:
    """Seeded Monte-Carlo rollout of the policy.

    Samples from the discretized pmfs by default so the simulation
    validates exactly the model the solvers optimise; ``continuous=True``
    draws normal demand from the continuous distribution instead, for
    discretization-bias studies. Partial backlogging (instance beta < 1)
    truncates negative closing inventories after the penalty is charged.
    """
    _check_policy(instance, policy)
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    ctx = context if context is not None else SolveContext(
        instance, tail_eps=tail_eps, quantile_eps=quantile_eps
    )
    p = ctx.params
    rng = np.random.default_rng(seed)
    demands = _sample_demands(ctx, n_paths, rng, continuous)
    reviews = {rv.period: rv for rv in policy.reviews}
    inv = np.full(n_paths, float(instance.I0))
    cost = np.zeros(n_paths)
    for t in range(1, instance.T + 1):
        rv = reviews.get(t)
        if rv is not None:
            order = inv < rv.reorder
            q = np.where(order, rv.order_up_to - inv, 0.0)
            cost += p.W + p.K * (q > 0)
            inv = inv + q
        inv = inv - demands[:, t - 1]
        cost += p.h * np.maximum(inv, 0.0) + p.b * np.maximum(-inv, 0.0)
        if instance.beta < 1.0:
            inv = np.where(inv < 0, np.round(instance.beta * inv), inv)
    mc_mean = float(cost.mean())
    if n_paths > 1:
        halfwidth = float(1.96 * cost.std(ddof=1) / math.sqrt(n_paths))
    else:
        halfwidth = 0.0
    analytic = expected_cost(instance, policy, context=ctx)
    return EvalReport(
        expected_cost=analytic,
        mc_mean=mc_mean,
        mc_halfwidth_95=halfwidth,
        n_paths=n_paths,
        seed=seed,
    )


def optimality_gap(policy_cost: float, optimal_cost: float) -> float:
    """Relative excess cost of a policy over the optimum.

    Negative gaps beyond numerical noise mean the "optimal" cost was not
    optimal, i.e. an oracle violation, and are rejected loudly.
    """
    if optimal_cost <= 0:
        raise ValueError("optimal cost must be positive")
    gap = (policy_cost - optimal_cost) / optimal_cost
    if gap < -1e-8:
        raise ValueError(
            f"policy cost {policy_cost} beats the supposed optimum {optimal_cost}"
        )
    return gap

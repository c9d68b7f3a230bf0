"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from rss_policy import CostParams, DemandSpec, Instance, SolveContext


def direct_cycle_cost(ctx: SolveContext, t: int, i: int, q: int, r: int) -> float:
    """Cycle cost by direct summation over the cumulative-demand pmfs.

    Independent of the memoised recursion: charges review cost, order
    cost if an order is placed, and for each in-cycle period the expected
    holding/penalty on post-order position minus cumulative demand.
    """
    p = ctx.params
    cost = p.W + (p.K if q > 0 else 0.0)
    y = i + q
    for j in range(1, r + 1):
        pmf = ctx.demand.cumulative(t, t + j)
        for m, prob in enumerate(pmf.probs):
            close = y - (pmf.offset + m)
            cost += prob * (p.h * close if close >= 0 else -p.b * close)
    return cost


def brute_force_every_period(ctx: SolveContext) -> np.ndarray:
    """Value iteration with a review in every period and a full order
    search; period-1 value table over the grid. Tiny instances only."""
    inst, grid = ctx.instance, ctx.grid
    p = inst.params
    values = np.zeros(grid.size)
    for t in range(inst.T, 0, -1):
        pmf = ctx.demand.period(t)
        new_values = np.empty(grid.size)
        for i in range(grid.min_inv, grid.max_inv + 1):
            best = None
            for q in range(0, grid.max_inv - i + 1):
                y = i + q
                c = p.W + (p.K if q > 0 else 0.0)
                for m, prob in enumerate(pmf.probs):
                    x = y - (pmf.offset + m)
                    hp = p.h * x if x >= 0 else -p.b * x
                    c += prob * (hp + values[max(x, grid.min_inv) - grid.min_inv])
                if best is None or c < best:
                    best = c
            new_values[i - grid.min_inv] = best
        values = new_values
    return values


def random_desk_instance(rng: np.random.Generator, horizon=None, mean_range=(5.0, 20.0)) -> Instance:
    """Small instance in the randomized-suite parameter box."""
    T = int(rng.integers(2, 7)) if horizon is None else horizon
    params = CostParams(
        K=float(rng.uniform(20.0, 320.0)),
        W=float(rng.uniform(20.0, 320.0)),
        h=1.0,
        b=float(rng.uniform(4.0, 16.0)),
    )
    demand = tuple(
        DemandSpec("poisson", float(m)) for m in rng.uniform(*mean_range, size=T)
    )
    return Instance(T=T, params=params, I0=0, demand=demand)


def deterministic_instance(means, K=100.0, W=10.0, h=1.0, b=1000.0, I0=0) -> Instance:
    """Point-mass demand (normal with cv 0) for hand-checkable cases."""
    return Instance(
        T=len(means),
        params=CostParams(K=K, W=W, h=h, b=b),
        I0=I0,
        demand=tuple(DemandSpec("normal", float(m), 0.0) for m in means),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

"""Exact (R,s,S) baseline by exhaustive schedule enumeration.

For a fixed review schedule the problem reduces to a restricted (s,S)
computation: ordering is only allowed at scheduled reviews, and the
between-review holding/penalty accrues through the shared cycle-cost
engine. Enumerating every schedule (every composition of the horizon
with a mandatory first review) and solving each to optimality yields
the exact optimum at desk scale, which is what the optimality gap of
the heuristic is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .model import Instance, Policy, PolicyReview
from .solver import SolveContext, SolveStats, ValueTables, _review_table

DEFAULT_SCHEDULE_CAP = 14


class HorizonCapError(ValueError):
    """Raised when full enumeration is requested beyond the horizon cap."""


@dataclass(frozen=True)
class ReviewSchedule:
    """An ordered set of review periods starting at period 1."""

    periods: tuple[int, ...]

    def __post_init__(self) -> None:
        periods = tuple(int(t) for t in self.periods)
        if not periods or periods[0] != 1:
            raise ValueError("a schedule must start with a review at period 1")
        if any(b <= a for a, b in zip(periods, periods[1:])):
            raise ValueError("review periods must be strictly increasing")
        object.__setattr__(self, "periods", periods)

    def cycles(self, horizon: int) -> tuple[int, ...]:
        """Cycle lengths; they sum to the horizon."""
        if self.periods[-1] > horizon:
            raise ValueError("schedule extends past the horizon")
        ends = self.periods[1:] + (horizon + 1,)
        return tuple(e - s for s, e in zip(self.periods, ends))

    @property
    def n_reviews(self) -> int:
        return len(self.periods)


def iter_schedules(horizon: int) -> Iterator[ReviewSchedule]:
    """All 2^(T-1) schedules in lexicographic order of review periods."""

    def rec(prefix: list[int], nxt: int) -> Iterator[tuple[int, ...]]:
        yield tuple(prefix)
        for t in range(nxt, horizon + 1):
            prefix.append(t)
            yield from rec(prefix, t + 1)
            prefix.pop()

    for periods in rec([1], 2):
        yield ReviewSchedule(periods)


@dataclass
class ScarfResult:
    """Optimal thresholds and cost for one fixed schedule."""

    policy: Policy
    cost: float
    tables: ValueTables


def scarf_fixed_R(
    instance: Instance,
    schedule: ReviewSchedule,
    *,
    context: Optional[SolveContext] = None,
    tail_eps: float = 1e-6,
    quantile_eps: float = 1e-5,
) -> ScarfResult:
    """Optimal (s,S) levels for a fixed review schedule, via the backward
    threshold-scan recursion. The review cost is charged once per
    scheduled review."""
    ctx = context if context is not None else SolveContext(
        instance, tail_eps=tail_eps, quantile_eps=quantile_eps
    )
    T = instance.T
    cycles = schedule.cycles(T)
    stats = SolveStats()
    grid = ctx.grid
    cost_to_go: dict[int, np.ndarray] = {T + 1: np.zeros(grid.size)}
    cycle_length: dict[int, int] = {}
    reorder: dict[int, int] = {}
    order_up_to: dict[int, int] = {}
    future = cost_to_go[T + 1]
    for t, r in zip(reversed(schedule.periods), reversed(cycles)):
        res = _review_table(ctx, t, r, future, stats)
        cost_to_go[t] = res.table
        cycle_length[t] = r
        reorder[t] = res.reorder
        order_up_to[t] = res.order_up_to
        future = res.table
    tables = ValueTables(
        grid=grid,
        horizon=T,
        cost_to_go=cost_to_go,
        cycle_length=cycle_length,
        reorder=reorder,
        order_up_to=order_up_to,
        stats=stats,
        algorithm="scarf_fixed_R",
    )
    policy = Policy(
        horizon=T,
        reviews=tuple(
            PolicyReview(period=t, cycle=r, reorder=reorder[t], order_up_to=order_up_to[t])
            for t, r in zip(schedule.periods, cycles)
        ),
    )
    return ScarfResult(policy=policy, cost=tables.value(1, instance.I0), tables=tables)


@dataclass
class EnumerationResult:
    policy: Policy
    cost: float
    schedule: ReviewSchedule
    n_schedules: int
    stats: SolveStats


def enumerate_optimal(
    instance: Instance,
    *,
    cap: int = DEFAULT_SCHEDULE_CAP,
    context: Optional[SolveContext] = None,
    tail_eps: float = 1e-6,
    quantile_eps: float = 1e-5,
) -> EnumerationResult:
    """Exact optimum over all review schedules.

    Ties between equally cheap schedules go to the lexicographically
    earliest one. Value tables for shared schedule suffixes are reused
    across the enumeration; each schedule's result is identical to a
    standalone ``scarf_fixed_R`` call.
    """
    if instance.T > cap:
        raise HorizonCapError(
            f"enumeration over 2^{instance.T - 1} schedules exceeds the cap "
            f"T <= {cap}; use the heuristic solver for long horizons"
        )
    ctx = context if context is not None else SolveContext(
        instance, tail_eps=tail_eps, quantile_eps=quantile_eps
    )
    T = instance.T
    stats = SolveStats()
    terminal = np.zeros(ctx.grid.size)
    memo: dict[tuple[int, ...], np.ndarray] = {}

    def table_for(periods: tuple[int, ...]) -> np.ndarray:
        hit = memo.get(periods)
        if hit is not None:
            return hit
        t = periods[0]
        nxt = periods[1] if len(periods) > 1 else T + 1
        future = table_for(periods[1:]) if len(periods) > 1 else terminal
        res = _review_table(ctx, t, nxt - t, future, stats)
        memo[periods] = res.table
        return res.table

    i0_idx = ctx.grid.index(instance.I0)
    best_cost = float("inf")
    best_schedule: Optional[ReviewSchedule] = None
    count = 0
    for schedule in iter_schedules(T):
        count += 1
        cost = float(table_for(schedule.periods)[i0_idx])
        if cost < best_cost:
            best_cost = cost
            best_schedule = schedule
    assert best_schedule is not None
    result = scarf_fixed_R(instance, best_schedule, context=ctx)
    return EnumerationResult(
        policy=result.policy,
        cost=result.cost,
        schedule=best_schedule,
        n_schedules=count,
        stats=stats,
    )

"""Approximate-SDP solvers for (R,s,S) policy parameters.

The exact problem jointly optimises the review schedule, reorder levels
and order-up-to levels. The heuristic here relaxes it: sweeping
backwards over periods, each period picks the cycle length that is
locally best *assuming an order is placed and the inventory is topped
up to the best level* (equivalently, negative orders are allowed when
comparing cycles). For the chosen cycle the reorder and order-up-to
levels are then exact, so the output is a well-formed (R,s,S) policy
whose cost the value tables report consistently.

Two sweeps produce identical results:

* ``solve_plain`` searches every order quantity at every inventory
  level (slow, kept as the reference implementation);
* ``solve_kconvex`` exploits K-convexity of the no-order cost curve: a
  single descending scan per candidate cycle finds the order-up-to
  level (running minimum) and the reorder level (first level whose
  no-order cost exceeds the minimum by more than K), and every lower
  state takes the flat ordering-branch value.

``solve_lost_sales`` is the plain sweep with the partial-backlog
transition applied to negative closing inventories each period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .costs import CycleCostEngine
from .demand import CumulativeDemandCache, discretize
from .model import Instance, Policy, PolicyReview

DEFAULT_QUANTILE_EPS = 1e-5


@dataclass(frozen=True)
class InventoryGrid:
    """Integer inventory levels [min_inv, max_inv] the solvers sweep over."""

    min_inv: int
    max_inv: int

    def __post_init__(self) -> None:
        if not self.min_inv <= 0 <= self.max_inv:
            raise ValueError("grid must contain zero")

    @property
    def max_order(self) -> int:
        return self.max_inv - self.min_inv

    @property
    def size(self) -> int:
        return self.max_inv - self.min_inv + 1

    def index(self, i: int) -> int:
        if not self.min_inv <= i <= self.max_inv:
            raise ValueError(f"inventory {i} outside grid [{self.min_inv}, {self.max_inv}]")
        return i - self.min_inv

    def levels(self) -> np.ndarray:
        return np.arange(self.min_inv, self.max_inv + 1)


def build_grid(
    instance: Instance,
    demand: CumulativeDemandCache,
    quantile_eps: float = DEFAULT_QUANTILE_EPS,
) -> InventoryGrid:
    """Size the grid from the total-demand quantile, with 10% headroom.

    The ceiling is the (1 - quantile_eps) quantile of total horizon
    demand rounded up by 10%; the floor is its negative. Both are
    widened if needed so the initial inventory lies on the grid.
    """
    if not 0 < quantile_eps <= 1e-4:
        raise ValueError("quantile_eps must lie in (0, 1e-4]")
    total = demand.cumulative(1, instance.T + 1)
    m = total.quantile(1.0 - quantile_eps)
    max_inv = int(math.ceil(1.1 * m))
    max_inv = max(max_inv, instance.I0, 0)
    min_inv = min(-max_inv, instance.I0)
    return InventoryGrid(min_inv=min_inv, max_inv=max_inv)


@dataclass
class SolveStats:
    """Work counters: inventory states whose cycle value was computed, and
    order-quantity candidates examined."""

    states_evaluated: int = 0
    q_iterations: int = 0


class SolveContext:
    """Discretized demand, grid and cost engine shared by solver runs,
    the exact baseline and the policy evaluator on one instance."""

    def __init__(
        self,
        instance: Instance,
        tail_eps: float = 1e-6,
        quantile_eps: float = DEFAULT_QUANTILE_EPS,
    ):
        self.instance = instance
        self.demand = CumulativeDemandCache(
            [discretize(spec, tail_eps) for spec in instance.demand]
        )
        self.grid = build_grid(instance, self.demand, quantile_eps)
        self.engine = CycleCostEngine(
            instance.params,
            [self.demand.period(t) for t in range(1, instance.T + 1)],
            low=self.grid.min_inv,
            high=self.grid.max_inv,
        )

    @property
    def params(self):
        return self.instance.params


@dataclass
class ValueTables:
    """Cost-to-go tables and per-period cycle choices from one solve.

    ``cost_to_go[t]`` is indexed by the grid (period T+1 is identically
    zero); ``cycle_length``/``reorder``/``order_up_to`` hold the chosen
    cycle and thresholds for every period 1..T.
    """

    grid: InventoryGrid
    horizon: int
    cost_to_go: dict[int, np.ndarray]
    cycle_length: dict[int, int]
    reorder: dict[int, int]
    order_up_to: dict[int, int]
    stats: SolveStats
    algorithm: str

    def value(self, t: int, i: int) -> float:
        return float(self.cost_to_go[t][self.grid.index(i)])

    def root_cost(self, i0: int) -> float:
        """Expected policy cost from period 1 with opening inventory i0."""
        return self.value(1, i0)


class _Scan:
    """Descending threshold scan over a no-order cost curve.

    Tracks the running minimum (the order-up-to candidate) and stops at
    the first level whose cost exceeds the minimum by more than K; that
    level and everything below it prefers ordering. Both solver variants
    run their decisions through this class so ties break identically.
    """

    __slots__ = ("K", "best_n", "best_i", "stop_i")

    def __init__(self, K: float):
        self.K = K
        self.best_n: Optional[float] = None
        self.best_i: Optional[int] = None
        self.stop_i: Optional[int] = None

    def push(self, i: int, n: float) -> bool:
        """Feed the next (lower) level; returns False once the scan stops."""
        if self.best_n is None or n < self.best_n:
            self.best_n = n
            self.best_i = i
            return True
        if n > self.best_n + self.K:
            self.stop_i = i
            return False
        return True


def _cycle_value_fn(
    ctx: SolveContext, t: int, r: int, future: np.ndarray
) -> Callable[[int], float]:
    """Cost of committing to a cycle of length r at period t from
    post-order position y, excluding the review/order fixed costs:
    expected in-cycle holding/penalty plus the expected cost-to-go at
    the next review. Demand mass that would drive the next-review state
    below the grid accrues at the grid floor."""
    cum = ctx.demand.cumulative(t, t + r)
    rev = np.ascontiguousarray(cum.probs[::-1])
    m = len(cum)
    pad = cum.max_value
    padded = np.empty(pad + future.shape[0])
    padded[:pad] = future[0]
    padded[pad:] = future
    base = -ctx.grid.min_inv
    el = ctx.engine.cycle_hp_fn(t, r)
    dot = np.dot

    def value(y: int) -> float:
        a = y + base
        return el(y) + float(dot(rev, padded[a : a + m]))

    return value


@dataclass
class _CycleResult:
    table: np.ndarray
    best_n: float
    order_up_to: int
    reorder: int


def _publish(
    grid: InventoryGrid, W: float, wk: float, vals: np.ndarray, scan: _Scan
) -> _CycleResult:
    """Turn scanned no-order values into a full cost table: scanned states
    keep their no-order cost, states at or below the stop level take the
    ordering-branch value."""
    table = np.empty(grid.size)
    if scan.stop_i is None:
        table[:] = W + vals
        reorder = grid.min_inv  # ordering never preferred on the grid
    else:
        k = scan.stop_i - grid.min_inv
        table[k:] = W + vals[k:]
        table[: k + 1] = wk + scan.best_n
        reorder = scan.stop_i + 1
    assert scan.best_i is not None and scan.best_n is not None
    return _CycleResult(table, scan.best_n, scan.best_i, reorder)


def _review_table(
    ctx: SolveContext,
    t: int,
    r: int,
    future: np.ndarray,
    stats: SolveStats,
) -> _CycleResult:
    """K-convexity sweep for one (period, cycle length) pair: descending
    scan with early stop, then the flat ordering-branch fill."""
    p = ctx.params
    grid = ctx.grid
    fval = _cycle_value_fn(ctx, t, r, future)
    vals = np.empty(grid.size)
    scan = _Scan(p.K)
    for i in range(grid.max_inv, grid.min_inv - 1, -1):
        n = fval(i)
        stats.states_evaluated += 1
        vals[i - grid.min_inv] = n
        if not scan.push(i, n):
            break
    return _publish(grid, p.W, p.W + p.K, vals, scan)


def _plain_cycle_table(
    ctx: SolveContext,
    t: int,
    r: int,
    future: np.ndarray,
    stats: SolveStats,
    value_fn: Optional[Callable[[int], float]] = None,
) -> _CycleResult:
    """Exhaustive sweep for one (period, cycle length) pair: every state,
    every order quantity. Quantities are searched up to the grid ceiling,
    where the order-up-to candidates live."""
    p = ctx.params
    grid = ctx.grid
    fval = value_fn if value_fn is not None else _cycle_value_fn(ctx, t, r, future)
    min_inv, max_inv = grid.min_inv, grid.max_inv
    W = p.W
    wk = W + p.K
    vals = np.empty(grid.size)
    for i in range(max_inv, min_inv - 1, -1):
        vals[i - min_inv] = fval(i)
        stats.states_evaluated += 1
        stats.q_iterations += 1  # the q = 0 candidate
    table = np.empty(grid.size)
    for idx in range(grid.size):
        i = min_inv + idx
        best = W + vals[idx]
        for q in range(1, max_inv - i + 1):
            cand = wk + fval(i + q)
            stats.q_iterations += 1
            if cand < best:
                best = cand
        table[idx] = best
    scan = _Scan(p.K)
    for idx in range(grid.size - 1, -1, -1):
        if not scan.push(min_inv + idx, vals[idx]):
            break
    result = _publish(grid, W, wk, vals, scan)
    return _CycleResult(table, result.best_n, result.order_up_to, result.reorder)


def _sweep(
    ctx: SolveContext,
    cycle_table: Callable[..., _CycleResult],
    algorithm: str,
) -> ValueTables:
    """Backward sweep over periods, keeping the locally best cycle length.

    Ties between cycle lengths go to the shorter cycle; the order-up-to
    tie-break (largest level) is fixed inside the descending scan.
    """
    T = ctx.instance.T
    grid = ctx.grid
    stats = SolveStats()
    cost_to_go: dict[int, np.ndarray] = {T + 1: np.zeros(grid.size)}
    cycle_length: dict[int, int] = {}
    reorder: dict[int, int] = {}
    order_up_to: dict[int, int] = {}
    for t in range(T, 0, -1):
        best: Optional[_CycleResult] = None
        best_r = 0
        for r in range(1, T - t + 2):
            res = cycle_table(ctx, t, r, cost_to_go[t + r], stats)
            if best is None or res.best_n < best.best_n:
                best = res
                best_r = r
        assert best is not None
        cost_to_go[t] = best.table
        cycle_length[t] = best_r
        reorder[t] = best.reorder
        order_up_to[t] = best.order_up_to
    return ValueTables(
        grid=grid,
        horizon=T,
        cost_to_go=cost_to_go,
        cycle_length=cycle_length,
        reorder=reorder,
        order_up_to=order_up_to,
        stats=stats,
        algorithm=algorithm,
    )


def _context(instance, context, tail_eps, quantile_eps) -> SolveContext:
    if context is not None:
        if context.instance is not instance and context.instance != instance:
            raise ValueError("context was built for a different instance")
        return context
    return SolveContext(instance, tail_eps=tail_eps, quantile_eps=quantile_eps)


def solve_plain(
    instance: Instance,
    *,
    context: Optional[SolveContext] = None,
    tail_eps: float = 1e-6,
    quantile_eps: float = DEFAULT_QUANTILE_EPS,
) -> ValueTables:
    """Reference sweep: full order-quantity search at every state."""
    if instance.beta < 1.0:
        raise ValueError("partial backlogging requires solve_lost_sales")
    ctx = _context(instance, context, tail_eps, quantile_eps)
    return _sweep(ctx, _plain_cycle_table, "plain")


def solve_kconvex(
    instance: Instance,
    *,
    context: Optional[SolveContext] = None,
    tail_eps: float = 1e-6,
    quantile_eps: float = DEFAULT_QUANTILE_EPS,
) -> ValueTables:
    """Accelerated sweep using the K-convexity threshold scan. Produces
    the same tables and policy as ``solve_plain``."""
    if instance.beta < 1.0:
        raise ValueError("partial backlogging requires solve_lost_sales")
    ctx = _context(instance, context, tail_eps, quantile_eps)
    return _sweep(ctx, _review_table, "kconvex")


# ----------------------------------------------------------------------
# Partial lost sales
# ----------------------------------------------------------------------

def _truncate(x: np.ndarray, beta: float) -> np.ndarray:
    """Partial-backlog state transition: negative closing inventories keep
    only the backlogged fraction, rounded to the nearest integer."""
    return np.where(x < 0, np.round(beta * x).astype(np.int64), x)


def _lost_sales_curve(
    ctx: SolveContext, t: int, r: int, future: np.ndarray, beta: float
) -> np.ndarray:
    """No-order cost curve of a cycle under partial backlogging, on the
    grid of post-order positions. Penalty is charged on the full
    pre-truncation shortfall each period; only the backlogged fraction
    carries over."""
    grid = ctx.grid
    p = ctx.params
    hi = grid.max_inv
    periods = [ctx.demand.period(tau) for tau in range(t, t + r)]
    # Entry-state floors per in-cycle period: each period reaches one
    # demand span lower before truncation pulls the state back up.
    vlo = [grid.min_inv]
    for k in range(1, r):
        pre = vlo[k - 1] - periods[k - 1].max_value
        vlo.append(int(pre if pre >= 0 else round(beta * pre)))
    w: Optional[np.ndarray] = None
    for k in range(r - 1, -1, -1):
        pmf = periods[k]
        xlo = vlo[k] - pmf.max_value
        xs = np.arange(xlo, hi + 1)
        closing = p.h * np.maximum(xs, 0.0) + p.b * np.maximum(-xs, 0.0)
        nxt_state = _truncate(xs, beta)
        if k == r - 1:
            idx = np.clip(nxt_state, grid.min_inv, hi) - grid.min_inv
            nxt_vals = future[idx]
        else:
            assert w is not None
            idx = np.clip(nxt_state - vlo[k + 1], 0, w.shape[0] - 1)
            nxt_vals = w[idx]
        a = closing + nxt_vals
        m = len(pmf)
        conv = np.convolve(a, pmf.probs)
        w = conv[m - 1 : m - 1 + (hi - vlo[k] + 1)]
    assert w is not None
    return w  # vlo[0] == grid.min_inv, so w is grid-aligned


def solve_lost_sales(
    instance: Instance,
    *,
    context: Optional[SolveContext] = None,
    tail_eps: float = 1e-6,
    quantile_eps: float = DEFAULT_QUANTILE_EPS,
) -> ValueTables:
    """Plain sweep under partial backlogging (0 <= beta <= 1).

    With beta = 1 this is exactly ``solve_plain``. For beta < 1 the
    no-order cost curve is not guaranteed K-convex, so the published
    reorder level is the threshold of the descending scan and may only
    approximate a non-interval ordering region.
    """
    if not 0.0 <= instance.beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    if instance.beta == 1.0:
        return solve_plain(
            instance, context=context, tail_eps=tail_eps, quantile_eps=quantile_eps
        )
    ctx = _context(instance, context, tail_eps, quantile_eps)
    beta = instance.beta

    def cycle_table(ctx, t, r, future, stats):
        curve = _lost_sales_curve(ctx, t, r, future, beta)
        min_inv = ctx.grid.min_inv
        return _plain_cycle_table(
            ctx, t, r, future, stats, value_fn=lambda y: float(curve[y - min_inv])
        )

    return _sweep(ctx, cycle_table, "lost_sales")


# ----------------------------------------------------------------------
# Policy extraction and diagnostics
# ----------------------------------------------------------------------

def extract_policy(tables: ValueTables, instance: Instance) -> Policy:
    """Walk the chosen cycle lengths forward from the mandatory period-1
    review and collect the visited thresholds."""
    if tables.horizon != instance.T:
        raise ValueError("tables belong to a different horizon")
    reviews = []
    t = 1
    while t <= instance.T:
        if t not in tables.cycle_length:
            raise ValueError(f"value tables are incomplete at period {t}")
        r = tables.cycle_length[t]
        reviews.append(
            PolicyReview(
                period=t,
                cycle=r,
                reorder=tables.reorder[t],
                order_up_to=tables.order_up_to[t],
            )
        )
        t += r
    return Policy(horizon=instance.T, reviews=tuple(reviews))


def no_order_curve(
    ctx: SolveContext, t: int, r: int, future: np.ndarray
) -> np.ndarray:
    """Full no-order cost curve (review cost included) of one candidate
    cycle over the grid; used to validate K-convexity."""
    fval = _cycle_value_fn(ctx, t, r, future)
    W = ctx.params.W
    return np.array([W + fval(i) for i in range(ctx.grid.min_inv, ctx.grid.max_inv + 1)])

"""Discrete demand distributions on an integer grid.

Per-period demand is represented as a probability mass function over
nonnegative integer quantities. Poisson demand is natively integer;
normal demand is discretized by unit-width CDF differences with the
mass below -0.5 folded into zero. Multi-period (cumulative) demand is
obtained by exact convolution and cached, since the solvers query the
same period ranges many times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm, poisson

DEFAULT_TAIL_EPS = 1e-6
_MASS_TOL = 1e-9


@dataclass(frozen=True)
class DemandSpec:
    """Distribution family and parameters for one period's demand.

    kind is "poisson" or "normal". For normal demand the standard
    deviation is ``cv * mean`` (coefficient of variation); cv is
    ignored for Poisson.
    """

    kind: str
    mean: float
    cv: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("poisson", "normal"):
            raise ValueError(f"unknown demand kind: {self.kind!r}")
        if self.mean < 0:
            raise ValueError("demand mean must be nonnegative")
        if self.cv < 0:
            raise ValueError("coefficient of variation must be nonnegative")

    @property
    def sigma(self) -> float:
        return self.cv * self.mean


@dataclass(frozen=True)
class DemandPmf:
    """Immutable pmf over consecutive integers ``offset, offset+1, ...``."""

    offset: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a nonempty 1-D array")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite and nonnegative")
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"pmf mass {total} too far from 1 to renormalize")
        if self.offset < 0:
            raise ValueError("demand support must be nonnegative")
        probs = probs / total
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self) -> int:
        return self.probs.shape[0]

    @property
    def max_value(self) -> int:
        """Largest support point."""
        return self.offset + len(self) - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self))

    def mean(self) -> float:
        return float(np.dot(self.probs, self.support))

    def variance(self) -> float:
        m = self.mean()
        return float(np.dot(self.probs, (self.support - m) ** 2))

    def cdf(self) -> np.ndarray:
        """Cumulative probabilities aligned with ``support``."""
        return np.cumsum(self.probs)

    def quantile(self, q: float) -> int:
        """Smallest support value with at least mass q below or at it."""
        idx = int(np.searchsorted(self.cdf(), q, side="left"))
        return self.offset + min(idx, len(self) - 1)


def point_mass(value: int) -> DemandPmf:
    """Degenerate pmf concentrated at ``value``."""
    return DemandPmf(offset=int(value), probs=np.array([1.0]))


def discretize(spec: DemandSpec, tail_eps: float = DEFAULT_TAIL_EPS) -> DemandPmf:
    """Truncate and renormalize a demand distribution onto the integers.

    The support is cut at the smallest point whose CDF reaches
    ``1 - tail_eps``; the remaining mass is spread by renormalization.
    """
    if not 0 < tail_eps < 0.01:
        raise ValueError("tail_eps must lie in (0, 0.01)")
    if spec.kind == "poisson":
        if spec.mean == 0:
            return point_mass(0)
        kmax = int(poisson.ppf(1.0 - tail_eps, spec.mean))
        probs = poisson.pmf(np.arange(kmax + 1), spec.mean)
        return DemandPmf(offset=0, probs=probs)
    # Normal with sigma = cv * mean; cv = 0 degenerates to a point mass
    # at the nearest integer.
    sigma = spec.sigma
    if sigma == 0:
        return point_mass(int(round(spec.mean)))
    kmax = int(np.ceil(spec.mean - 0.5 + sigma * norm.ppf(1.0 - tail_eps)))
    kmax = max(kmax, 0)
    edges = (np.arange(kmax + 2) - 0.5 - spec.mean) / sigma
    cdfs = norm.cdf(edges)
    probs = np.diff(cdfs)
    probs[0] += cdfs[0]  # fold mass below -0.5 into demand 0
    return DemandPmf(offset=0, probs=probs)


def convolve(a: DemandPmf, b: DemandPmf) -> DemandPmf:
    """Exact pmf of the sum of two independent integer demands."""
    return DemandPmf(offset=a.offset + b.offset, probs=np.convolve(a.probs, b.probs))


class CumulativeDemandCache:
    """Per-period pmfs plus cached pmfs of demand summed over period ranges.

    ``cumulative(t, j)`` is the demand accumulated from the start of
    period t to the start of period j (periods t..j-1), for 1-based
    periods and ``1 <= t < j <= T+1``. Entries are immutable once
    stored, so concurrent readers are safe; population is expected to
    happen from a single solver thread.
    """

    def __init__(self, period_pmfs: Sequence[DemandPmf]):
        if len(period_pmfs) == 0:
            raise ValueError("need at least one period")
        self._periods = list(period_pmfs)
        self._cum: dict[tuple[int, int], DemandPmf] = {}

    @property
    def horizon(self) -> int:
        return len(self._periods)

    def period(self, t: int) -> DemandPmf:
        """Pmf of the demand in period t (1-based)."""
        if not 1 <= t <= self.horizon:
            raise ValueError(f"period {t} outside horizon 1..{self.horizon}")
        return self._periods[t - 1]

    def cumulative(self, t: int, j: int) -> DemandPmf:
        if not (1 <= t < j <= self.horizon + 1):
            raise ValueError(f"need 1 <= t < j <= T+1, got t={t}, j={j}")
        key = (t, j)
        hit = self._cum.get(key)
        if hit is not None:
            return hit
        if j == t + 1:
            pmf = self.period(t)
        else:
            pmf = convolve(self.cumulative(t, j - 1), self.period(j - 1))
        self._cum[key] = pmf
        return pmf

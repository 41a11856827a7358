"""Data containers, order statistics and exceedance counting.

Observation order is meaningful throughout: observation i (1-indexed) sits at
sample fraction i/n, and every window (z1, z2] of [0, 1] maps to a contiguous
index range. All functions here are pure and operate on immutable arrays.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, DataValidationError, DomainError

# Index fuzz: nz computed from z = i/n in floating point can land a few ulps
# below the integer i; floor/ceil must not lose the lattice point.
_EPS = 1e-9


def floor_index(v: float) -> int:
    return int(np.floor(v + _EPS))


def ceil_index(v: float) -> int:
    return int(np.ceil(v - _EPS))


def window_indices(n: int, z1: float, z2: float) -> tuple[int, int]:
    """Subsample index range for the window (z1, z2]: 1-indexed
    [floor(n*z1)+1, floor(n*z2)], possibly empty."""
    return floor_index(n * z1) + 1, floor_index(n * z2)


@dataclass(frozen=True)
class BivariateSample:
    """Time-ordered paired losses (x_i, y_i), i = 1..n."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if xs.ndim != 1 or ys.ndim != 1:
            raise DataValidationError("xs and ys must be one-dimensional")
        if xs.shape[0] != ys.shape[0]:
            raise DataValidationError(
                f"length mismatch: {xs.shape[0]} xs vs {ys.shape[0]} ys"
            )
        if xs.shape[0] < 4:
            raise DataValidationError("need at least 4 paired observations")
        if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
            raise DataValidationError("sample contains NaN or infinite entries")
        xs.setflags(write=False)
        ys.setflags(write=False)

    @property
    def n(self) -> int:
        return self.xs.shape[0]


@dataclass(frozen=True)
class TailConfig:
    """Intermediate orders: k sets the global rate, k1/k2 the per-margin
    tail sample sizes. s_j = k/k_j below 1 is allowed but flagged, since the
    asymptotics expect k >= k_j."""

    k: int
    k1: int
    k2: int

    def __post_init__(self):
        for name in ("k", "k1", "k2"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {v!r}")
        if self.s1 < 1 or self.s2 < 1:
            warnings.warn(
                f"s1={self.s1:.3g}, s2={self.s2:.3g}: ratios k/k_j below 1 fall "
                "outside the asymptotic regime; results may be unreliable",
                UserWarning,
                stacklevel=2,
            )

    @property
    def s1(self) -> float:
        return self.k / self.k1

    @property
    def s2(self) -> float:
        return self.k / self.k2

    def validate_for(self, n: int) -> None:
        if not (self.k < n and self.k1 < n and self.k2 < n):
            raise ConfigurationError(
                f"intermediate orders k={self.k}, k1={self.k1}, k2={self.k2} "
                f"must all be < n={n}"
            )

    @classmethod
    def with_default_k(cls, k1: int, k2: int) -> "TailConfig":
        """k defaults to max(k1, k2) so that both ratios s_j = k/k_j are >= 1."""
        return cls(k=max(k1, k2), k1=k1, k2=k2)


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant function on [0, 1].

    Takes ``initial_value`` on [0, jump_points[0]) and ``values[i]`` on
    [jump_points[i], jump_points[i+1]).
    """

    jump_points: np.ndarray
    values: np.ndarray
    initial_value: float = 0.0

    def __post_init__(self):
        jp = np.asarray(self.jump_points, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "jump_points", jp)
        object.__setattr__(self, "values", vals)
        if jp.shape != vals.shape or jp.ndim != 1:
            raise ConfigurationError("jump_points and values must be 1-d arrays of equal length")
        if jp.size and (jp[0] <= 0.0 or jp[-1] > 1.0):
            raise ConfigurationError("jump points must lie in (0, 1]")
        if jp.size > 1 and not (np.diff(jp) > 0).all():
            raise ConfigurationError("jump points must be strictly increasing")
        jp.setflags(write=False)
        vals.setflags(write=False)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        idx = np.searchsorted(self.jump_points, z, side="right") - 1
        out = np.where(idx >= 0, self.values[np.clip(idx, 0, None)], self.initial_value)
        return float(out) if out.ndim == 0 else out

    def sup_on(self, z1: float = 0.0, z2: float = 1.0) -> float:
        """Exact supremum over (z1, z2]: the function is constant between
        jumps, so the sup is attained at a jump in the window or at the level
        carried into it from z1 (right-continuity)."""
        best = float(self(z1))
        mask = (self.jump_points > z1) & (self.jump_points <= z2)
        if mask.any():
            best = max(best, float(self.values[mask].max()))
        return best


def cumulative_step(indicator: np.ndarray, scale: float) -> StepFunction:
    """Step function z -> sum(indicator[1..floor(n z)]) / scale with jumps
    only where the indicator fires."""
    indicator = np.asarray(indicator, dtype=bool)
    n = indicator.shape[0]
    idx = np.flatnonzero(indicator)
    jumps = (idx + 1) / n
    heights = np.cumsum(np.ones(idx.shape[0])) / scale
    return StepFunction(jump_points=jumps, values=heights, initial_value=0.0)


def order_statistic(values, r: int) -> float:
    """r-th smallest value, 1-indexed; duplicates allowed."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if not 1 <= r <= n:
        raise IndexError(f"order statistic rank {r} out of range 1..{n}")
    return float(np.partition(values, r - 1)[r - 1])


def tail_threshold(values, k: int) -> float:
    """(n-k)-th order statistic; with distinct values exactly k entries
    strictly exceed it."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if not 1 <= k < n:
        raise ConfigurationError(f"k={k} must satisfy 1 <= k < n={n}")
    return order_statistic(values, n - k)


def count_joint_exceedances(
    sample: BivariateSample, tx: float, ty: float, i_lo: int, i_hi: int
) -> int:
    """Number of indices i in [i_lo, i_hi] (1-indexed) with x_i > tx and
    y_i > ty. An empty window counts zero."""
    if i_hi < i_lo:
        return 0
    n = sample.n
    if i_lo < 1 or i_hi > n:
        raise DomainError(f"window [{i_lo}, {i_hi}] outside 1..{n}")
    sl = slice(i_lo - 1, i_hi)
    return int(np.count_nonzero((sample.xs[sl] > tx) & (sample.ys[sl] > ty)))

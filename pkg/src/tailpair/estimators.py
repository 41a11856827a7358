"""Point estimators for paired heavy-tailed series with time-varying scale.

Given losses v_1..v_n and an intermediate order k_j, the integrated scedasis
estimate is

    C_hat(z) = (1/k_j) * #{ i <= floor(n z) : v_i > v_(n-k_j) },

a nondecreasing step function with C_hat(0) = 0 and, absent ties, C_hat(1) = 1.

The empirical quasi-tail copula counts joint exceedances over per-argument
order-statistic thresholds inside an index window,

    R_hat(x, y; z1, z2) = (1/k) * #{ ceil(n z1) <= i <= floor(n z2) :
                                     x_i > x_(n-ceil(k1 x)), y_i > y_(n-ceil(k2 y)) },

and the window Hill estimator averages log-spacings of the top m order
statistics of the (z1, z2]-subsample, where m = k_j * (C_hat(z2) - C_hat(z1))
is by construction the integer count of window exceedances over the global
threshold.

The Delta normalizers turn squared contrasts of these estimators into
pivot-scaled test statistics; with s_j = k/k_j and r = R_hat(1,1):

    Delta1 = s1 + s2 - 2 s1 s2 r
    Delta2 = 2 (s1 + s2)
    Delta3 = 4/r + 2 s1 s2 r - (s1 - s2)^2 / Delta1 - (3/2) Delta2
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConfigurationError,
    DegenerateDependenceError,
    DomainError,
    InsufficientExceedancesError,
)
from .sample import (
    BivariateSample,
    StepFunction,
    TailConfig,
    ceil_index,
    cumulative_step,
    floor_index,
    tail_threshold,
    window_indices,
)


@dataclass(frozen=True)
class ScedasisEstimate:
    """Integrated scedasis step function plus the threshold that defined it."""

    curve: StepFunction
    k_j: int
    threshold: float
    tie_warning: bool

    def __call__(self, z):
        return self.curve(z)


@dataclass(frozen=True)
class HillEstimate:
    gamma_hat: float
    window: tuple[float, float]
    effective_k: int
    subsample_size: int


def estimate_integrated_scedasis(values, k_j: int) -> ScedasisEstimate:
    """Integrated scedasis estimate; jumps sit at exceedance indices i/n.

    Ties at the threshold are not exceedances (strict inequality), so tied
    data can end below 1 at z=1; that is flagged, not fixed.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if not 1 <= k_j < n:
        raise ConfigurationError(f"k_j={k_j} must satisfy 1 <= k_j < n={n}")
    thr = tail_threshold(values, k_j)
    exceed = values > thr
    count = int(exceed.sum())
    curve = cumulative_step(exceed, scale=k_j)
    return ScedasisEstimate(
        curve=curve, k_j=int(k_j), threshold=thr, tie_warning=(count != k_j)
    )


class QuasiTailCopulaEstimate:
    """Empirical quasi-tail copula with cached order statistics.

    Evaluate as ``est(x, y)`` for the full sample or ``est(x, y, z1, z2)``
    for an index window. Thresholds are the order statistics
    x_(n - ceil(k1 x)) and y_(n - ceil(k2 y)); x = 0 or y = 0 gives 0.
    """

    def __init__(self, sample: BivariateSample, config: TailConfig):
        config.validate_for(sample.n)
        self.sample = sample
        self.config = config
        self._xs_sorted = np.sort(sample.xs)
        self._ys_sorted = np.sort(sample.ys)

    def _threshold(self, sorted_values: np.ndarray, k_j: int, arg: float) -> float:
        n = sorted_values.shape[0]
        m = ceil_index(k_j * arg)
        if m >= n:
            raise DomainError(
                f"ceil(k_j * arg) = {m} >= n = {n}: argument {arg} too large"
            )
        return float(sorted_values[n - m - 1])  # (n-m)-th order statistic

    def __call__(self, x: float, y: float, z1: float = 0.0, z2: float = 1.0) -> float:
        if x < 0 or y < 0:
            raise DomainError("arguments must be nonnegative")
        if not 0.0 <= z1 <= z2 <= 1.0:
            raise DomainError(f"window ({z1}, {z2}] must satisfy 0 <= z1 <= z2 <= 1")
        n = self.sample.n
        if x == 0.0 or y == 0.0:
            return 0.0
        tx = self._threshold(self._xs_sorted, self.config.k1, x)
        ty = self._threshold(self._ys_sorted, self.config.k2, y)
        i_lo = max(1, ceil_index(n * z1))
        i_hi = floor_index(n * z2)
        if i_hi < i_lo:
            return 0.0
        sl = slice(i_lo - 1, i_hi)
        cnt = np.count_nonzero((self.sample.xs[sl] > tx) & (self.sample.ys[sl] > ty))
        return float(cnt) / self.config.k

    def value_11(self) -> float:
        return self(1.0, 1.0)

    def curve_11(self) -> StepFunction:
        """z -> R_hat(1, 1; 0, z) as a step function."""
        tx = self._threshold(self._xs_sorted, self.config.k1, 1.0)
        ty = self._threshold(self._ys_sorted, self.config.k2, 1.0)
        joint = (self.sample.xs > tx) & (self.sample.ys > ty)
        return cumulative_step(joint, scale=self.config.k)


def estimate_quasi_tail_copula(
    sample: BivariateSample,
    config: TailConfig,
    x: float,
    y: float,
    z1: float = 0.0,
    z2: float = 1.0,
) -> float:
    return QuasiTailCopulaEstimate(sample, config)(x, y, z1, z2)


def estimate_hill_subsample(
    values, k_j: int, scedasis: ScedasisEstimate, z1: float, z2: float
) -> HillEstimate:
    """Window Hill estimate on the (z1, z2]-subsample.

    The realized order m counts window exceedances over the full-sample
    threshold directly (never a rounded float product), and the log-spacing
    baseline is the (m+1)-th largest subsample value.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if not 0.0 <= z1 < z2 <= 1.0:
        raise DomainError(f"window ({z1}, {z2}] must satisfy 0 <= z1 < z2 <= 1")
    i_lo, i_hi = window_indices(n, z1, z2)
    sub = values[i_lo - 1 : i_hi]
    n_tilde = sub.shape[0]
    eff_k = int(np.count_nonzero(sub > scedasis.threshold))
    if eff_k < 2:
        raise InsufficientExceedancesError(
            f"window ({z1}, {z2}] holds {eff_k} exceedance(s); need at least 2"
        )
    if eff_k >= n_tilde:
        raise InsufficientExceedancesError(
            f"effective order {eff_k} must be below the subsample size {n_tilde}"
        )
    top = np.partition(sub, n_tilde - eff_k - 1)[n_tilde - eff_k - 1 :]
    if top[0] <= 0.0:
        raise DomainError("nonpositive values in the top order statistics; log undefined")
    logs = np.log(top)
    gamma = float(np.mean(logs[1:]) - logs[0])
    return HillEstimate(
        gamma_hat=gamma,
        window=(z1, z2),
        effective_k=eff_k,
        subsample_size=n_tilde,
    )


def hill_full(values, k_j: int) -> HillEstimate:
    """Classical Hill estimate with order k_j (window (0, 1])."""
    sced = estimate_integrated_scedasis(values, k_j)
    return estimate_hill_subsample(values, k_j, sced, 0.0, 1.0)


def delta1(config: TailConfig, r_hat_11: float) -> float:
    """Variance proxy for the log-Hill contrast; positive whenever
    R_hat(1,1) stays below its (k1 ^ k2)/k ceiling."""
    s1, s2 = config.s1, config.s2
    if r_hat_11 < 0 or r_hat_11 > min(config.k1, config.k2) / config.k + 1e-12:
        raise DomainError(
            f"R_hat(1,1)={r_hat_11} outside [0, min(k1,k2)/k={min(config.k1, config.k2)/config.k:.6g}]"
        )
    return s1 + s2 - 2.0 * s1 * s2 * r_hat_11


def delta2(config: TailConfig) -> float:
    """Variance proxy for split-sample contrasts: 2 (k/k1 + k/k2)."""
    return 2.0 * (config.s1 + config.s2)


def delta3(config: TailConfig, r_hat_11: float) -> float:
    """Variance proxy for the dependence-centered scedasis contrast.

    Nonpositive values signal that the estimates left the validity region;
    callers treat that as a diagnostic failure rather than dividing by it.
    """
    if r_hat_11 <= 0:
        raise DegenerateDependenceError(
            "R_hat(1,1) = 0: no joint tail exceedances, dependence-based test unavailable"
        )
    s1, s2 = config.s1, config.s2
    d1 = delta1(config, r_hat_11)
    cross = 0.0 if s1 == s2 else (s1 - s2) ** 2 / d1
    return 4.0 / r_hat_11 + 2.0 * s1 * s2 * r_hat_11 - cross - 1.5 * delta2(config)


def tail_dependence_diagnostic(sample: BivariateSample, config: TailConfig) -> float:
    """k-free dependence diagnostic:

        (1/sqrt(k1 k2)) * #{ i : x_i > x_(n-k1), y_i > y_(n-k2) }

    Near zero under tail independence; equals 1 for comonotone data with
    k1 = k2.
    """
    config.validate_for(sample.n)
    tx = tail_threshold(sample.xs, config.k1)
    ty = tail_threshold(sample.ys, config.k2)
    cnt = np.count_nonzero((sample.xs > tx) & (sample.ys > ty))
    return float(cnt) / float(np.sqrt(config.k1 * config.k2))

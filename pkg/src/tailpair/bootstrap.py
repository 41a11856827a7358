"""Multiplier bootstrap for the scedasis, quasi-tail-copula and Hill
estimators.

Replicate b perturbs every empirical sum with IID positive weights
xi_{b,i} / xi_bar (mean mu, sd sigma; standard exponential by default) and
replaces each order-statistic threshold by the generalized inverse of the
weighted tail function

    S(t; z1, z2) = sum_{i in window} (xi_i / xi_bar) 1(v_i > t) / [ n (C_hat(z2) - C_hat(z1)) ],

evaluated at the matching tail level. With xi identically 1 every bootstrap
estimator collapses to its plain counterpart, which the test-suite checks
exactly.

Replicate streams are pure functions of (seed, b), so ensembles are
bit-identical regardless of execution order or parallelism.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import ConfigurationError, DomainError, InsufficientExceedancesError
from .estimators import ScedasisEstimate
from .sample import (
    BivariateSample,
    StepFunction,
    TailConfig,
    ceil_index,
    floor_index,
    tail_threshold,
    window_indices,
)

_MAX_RESAMPLE = 100


@dataclass(frozen=True)
class MultiplierSpec:
    """Multiplier law: positive mean mu and sd sigma, plus a sampler."""

    distribution: str = "STANDARD_EXPONENTIAL"
    mu: float = 1.0
    sigma: float = 1.0
    sampler: Optional[Callable[[np.random.Generator, int], np.ndarray]] = None

    def __post_init__(self):
        if self.mu <= 0 or self.sigma <= 0:
            raise ConfigurationError(
                f"multiplier law needs mu > 0 and sigma > 0, got mu={self.mu}, sigma={self.sigma}"
            )
        if self.distribution == "CUSTOM" and self.sampler is None:
            raise ConfigurationError("CUSTOM multiplier spec requires a sampler")

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.distribution == "STANDARD_EXPONENTIAL":
            return rng.standard_exponential(n)
        return np.asarray(self.sampler(rng, n), dtype=float)


STANDARD_EXPONENTIAL = MultiplierSpec()


def _entropy(seed) -> list[int]:
    if isinstance(seed, (int, np.integer)):
        return [int(seed)]
    return [int(s) for s in seed]


def replicate_rng(seed, b: int, retry: int = 0) -> np.random.Generator:
    """Counter-based stream for replicate b: a pure function of (seed, b)."""
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed) + [b, retry]))


def draw_multipliers(
    spec: MultiplierSpec, n: int, seed, b: int
) -> tuple[np.ndarray, float]:
    """n IID multiplier draws for replicate b plus their mean.

    A nonpositive mean (possible only for signed CUSTOM laws) triggers a
    resample on an incremented stream counter.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    for retry in range(_MAX_RESAMPLE):
        xi = spec.draw(replicate_rng(seed, b, retry), n)
        xi_bar = float(xi.mean())
        if xi_bar > 0:
            return xi, xi_bar
    raise ConfigurationError(
        f"multiplier mean stayed nonpositive after {_MAX_RESAMPLE} resamples"
    )


@dataclass(frozen=True)
class WeightedTailQuantileFn:
    """Weighted tail function S of one replicate on one index window.

    ``values`` descending with aligned normalized weights xi/xi_bar;
    ``normalizer`` is n (C_hat(z2) - C_hat(z1)).
    """

    values_desc: np.ndarray
    weights_desc: np.ndarray
    window: tuple[float, float]
    normalizer: float


def weighted_quantile_fn(
    values,
    multipliers: np.ndarray,
    k_j: int,
    z1: float = 0.0,
    z2: float = 1.0,
) -> WeightedTailQuantileFn:
    """Build the weighted tail function of one replicate.

    The weight mean is taken over all n observations; the sum and candidate
    thresholds range over the (z1, z2] window only.
    """
    values = np.asarray(values, dtype=float)
    multipliers = np.asarray(multipliers, dtype=float)
    n = values.shape[0]
    if multipliers.shape[0] != n:
        raise ConfigurationError("multipliers must align with the sample")
    xi_bar = float(multipliers.mean())
    if xi_bar <= 0:
        raise DomainError("multiplier mean must be positive")
    thr = tail_threshold(values, k_j)
    i_lo, i_hi = window_indices(n, z1, z2)
    sub = values[i_lo - 1 : i_hi]
    w = multipliers[i_lo - 1 : i_hi] / xi_bar
    count = int(np.count_nonzero(sub > thr))  # k_j (C_hat(z2) - C_hat(z1))
    if count == 0:
        raise InsufficientExceedancesError(
            f"window ({z1}, {z2}] has no exceedances over the tail threshold"
        )
    order = np.argsort(-sub, kind="stable")
    return WeightedTailQuantileFn(
        values_desc=sub[order],
        weights_desc=w[order],
        window=(z1, z2),
        normalizer=n * count / k_j,
    )


def weighted_tail_quantile(fn: WeightedTailQuantileFn, level: float) -> float:
    """Generalized inverse inf{ t in sample : S(t) <= level }.

    Strict exceedance semantics: ties share the weight of all equal values.
    """
    if fn.values_desc.size == 0:
        raise DomainError("empty window: no candidate thresholds")
    if level < 0:
        raise DomainError(f"level {level} outside the realized range of S")
    bound = level * fn.normalizer
    v = fn.values_desc[::-1]  # ascending
    w = fn.weights_desc[::-1]
    cumw = np.cumsum(w)
    # weight strictly above v[i]: total minus weight of values <= v[i]
    last_eq = np.searchsorted(v, v, side="right") - 1
    above = cumw[-1] - cumw[last_eq]
    tol = 1e-12 * max(1.0, abs(bound))
    if bound > above[0] + tol:
        raise DomainError(f"level {level} outside the realized range of S")
    ok = above <= bound + tol
    return float(v[int(np.argmax(ok))])


def bootstrap_scedasis_curve(
    values, k_j: int, multipliers: np.ndarray
) -> StepFunction:
    """Replicate scedasis curve: weighted exceedance cumsum over the
    replicate's own tail threshold."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    qfn = weighted_quantile_fn(values, multipliers, k_j)
    thr_b = weighted_tail_quantile(qfn, k_j / n)
    xi_bar = float(np.asarray(multipliers, dtype=float).mean())
    w = np.asarray(multipliers, dtype=float) / xi_bar
    exceed = values > thr_b
    idx = np.flatnonzero(exceed)
    jumps = (idx + 1) / n
    heights = np.cumsum(w[idx]) / k_j
    return StepFunction(jump_points=jumps, values=heights, initial_value=0.0)


def bootstrap_scedasis(values, k_j: int, multipliers: np.ndarray, z: float) -> float:
    return float(bootstrap_scedasis_curve(values, k_j, multipliers)(z))


def bootstrap_quasi_tail_copula(
    sample: BivariateSample,
    config: TailConfig,
    multipliers: np.ndarray,
    x: float,
    y: float,
    z1: float = 0.0,
    z2: float = 1.0,
) -> float:
    """Replicate quasi-tail copula: weighted joint exceedances over the
    replicate thresholds at levels k1 x / n and k2 y / n."""
    config.validate_for(sample.n)
    n = sample.n
    if x <= 0 or y <= 0:
        return 0.0
    q1 = weighted_quantile_fn(sample.xs, multipliers, config.k1)
    q2 = weighted_quantile_fn(sample.ys, multipliers, config.k2)
    tx = weighted_tail_quantile(q1, config.k1 * x / n)
    ty = weighted_tail_quantile(q2, config.k2 * y / n)
    xi = np.asarray(multipliers, dtype=float)
    w = xi / xi.mean()
    i_lo = max(1, ceil_index(n * z1))
    i_hi = floor_index(n * z2)
    if i_hi < i_lo:
        return 0.0
    sl = slice(i_lo - 1, i_hi)
    joint = (sample.xs[sl] > tx) & (sample.ys[sl] > ty)
    return float(np.sum(w[sl] * joint)) / config.k


def bootstrap_hill(
    values,
    k_j: int,
    scedasis: ScedasisEstimate,
    multipliers: np.ndarray,
    z1: float = 0.0,
    z2: float = 1.0,
) -> float:
    """Replicate Hill estimate: weighted mean log-excess over the window's
    replicate threshold, normalized by k_j (C_hat(z2) - C_hat(z1))."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    qfn = weighted_quantile_fn(values, multipliers, k_j, z1, z2)
    thr_b = weighted_tail_quantile(qfn, k_j / n)
    if thr_b <= 0:
        raise DomainError("nonpositive bootstrap threshold; log undefined")
    i_lo, i_hi = window_indices(n, z1, z2)
    sub = values[i_lo - 1 : i_hi]
    count = int(np.count_nonzero(sub > scedasis.threshold))
    if count < 1:
        raise DomainError("window holds no exceedances over the plain threshold")
    xi = np.asarray(multipliers, dtype=float)
    w = xi / xi.mean()
    exceed = values > thr_b
    logs = np.log(np.where(exceed, values, 1.0)) - np.log(thr_b)
    return float(np.sum(w * logs * exceed)) / count


@dataclass(frozen=True)
class BootstrapEnsemble:
    """B replicate values of one statistic plus the multiplier spec."""

    replicates: np.ndarray
    spec: MultiplierSpec
    seed: int
    B: int

    def __post_init__(self):
        reps = np.asarray(self.replicates, dtype=float)
        object.__setattr__(self, "replicates", reps)
        if reps.shape != (self.B,):
            raise ConfigurationError("replicates must have length B")
        if not np.isfinite(reps).all():
            raise ConfigurationError("ensemble contains non-finite replicates")

    def empirical_cdf(self, x: float) -> float:
        return float(np.count_nonzero(self.replicates <= x)) / self.B

    def quantile(self, alpha: float) -> float:
        """Smallest ensemble value v with F_hat(v) >= alpha."""
        if not 0.0 < alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        srt = np.sort(self.replicates)
        idx = max(1, int(np.ceil(self.B * alpha)))
        return float(srt[idx - 1])


def run_ensemble(
    statistic_fn: Callable[[np.ndarray], float],
    n: int,
    B: int,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
) -> BootstrapEnsemble:
    """Evaluate ``statistic_fn`` on B independent multiplier vectors.

    Stream b feeds ``statistic_fn`` the replicate's multipliers; failures
    propagate with the replicate index attached.
    """
    if B < 1:
        raise ConfigurationError(f"B must be >= 1, got {B}")
    out = np.empty(B)
    for b in range(1, B + 1):
        xi, _ = draw_multipliers(spec, n, seed, b)
        try:
            out[b - 1] = statistic_fn(xi)
        except Exception as exc:
            raise type(exc)(f"replicate {b}: {exc}") from exc
    return BootstrapEnsemble(
        replicates=out,
        spec=spec,
        seed=seed if isinstance(seed, int) else tuple(seed),
        B=B,
    )

"""Four two-sample tail tests for paired heavy-tailed series.

Hypotheses, on losses x (series 1) and y (series 2):

    H10: equal extreme value indices (gamma1 = gamma2)
    H20: equal integrated scedasis functions (c1 = c2)
    H30: both of the above
    H40: equal scedasis functions and a constant unit mixture probability
         (homogeneous tail dependence, h == 1)

Each test exists in an asymptotic-distribution form and a multiplier
bootstrap form. The asymptotic H20/H30 statistics are built on an even/odd
index split so the two halves are independent: series-1 quantities come from
even-indexed x's, series-2 quantities from odd-indexed y's, each at half the
tail order. H40 and every bootstrap test use the full sample.

Normalization: squared contrasts are divided by the Delta constants from
``estimators`` and scaled by k; suprema over z are exact (all statistics are
step functions jumping only at lattice points i/n).

Reference distributions: the chi-square(1) law for squared log-Hill
contrasts, and the law of the squared Kolmogorov supremum for the
sup-of-squares statistics (F_ks(x) = K(sqrt(x)) with K the Kolmogorov
distribution).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bootstrap import (
    STANDARD_EXPONENTIAL,
    MultiplierSpec,
    draw_multipliers,
)
from .estimators import (
    delta1,
    delta2,
    delta3,
    estimate_integrated_scedasis,
    hill_full,
)
from .exceptions import (
    ConfigurationError,
    DegenerateDependenceError,
    DomainError,
    InsufficientExceedancesError,
)
from .sample import BivariateSample, TailConfig

HYPOTHESES = ("H10", "H20", "H30", "H40")
ASYMPTOTIC = "asymptotic"
BOOTSTRAP = "bootstrap"
DEFAULT_ALPHAS = (0.05, 0.1)

_SERIES_TOL = 1e-12


# ---------------------------------------------------------------------------
# reference distributions
# ---------------------------------------------------------------------------

def chi_square_1_cdf(x: float) -> float:
    """P(Z^2 <= x) = 2 Phi(sqrt(x)) - 1 for standard normal Z; 0 for x < 0."""
    if x <= 0.0:
        return 0.0
    return math.erf(math.sqrt(0.5 * x))


def kolmogorov_sq_cdf(x: float) -> float:
    """CDF of the squared Kolmogorov supremum,

        K(sqrt(x)) = 1 - 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x),

    with the series truncated once terms drop below 1e-12."""
    if x <= 0.0:
        return 0.0
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * x)
        if term < _SERIES_TOL:
            break
        total += sign * term
        sign = -sign
        j += 1
    return min(1.0, max(0.0, 1.0 - 2.0 * total))


@dataclass(frozen=True)
class ReferenceDistribution:
    kind: str
    cdf: Callable[[float], float]


CHI_SQUARE_1 = ReferenceDistribution("CHI_SQUARE_1", chi_square_1_cdf)
KOLMOGOROV_SQ = ReferenceDistribution("KOLMOGOROV_SQ", kolmogorov_sq_cdf)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class TestReport:
    """Outcome of one test: statistic, p-value, per-level decisions and the
    normalization constants that entered the statistic."""

    hypothesis: str
    method: str
    statistic: float
    p_value: float
    reject_at: dict
    normalizers: dict = field(default_factory=dict)
    components: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ConfigurationError(f"p-value {self.p_value} outside [0, 1]")


# ---------------------------------------------------------------------------
# shared full-sample and split-sample machinery
# ---------------------------------------------------------------------------

class _FullStats:
    """Threshold indicators, cumulative curves and Hill estimates shared by
    the full-sample tests. Curve arrays hold values at z = i/n, i = 1..n."""

    def __init__(self, sample: BivariateSample, config: TailConfig, with_hill: bool):
        config.validate_for(sample.n)
        self.sample = sample
        self.config = config
        n = sample.n
        sced1 = estimate_integrated_scedasis(sample.xs, config.k1)
        sced2 = estimate_integrated_scedasis(sample.ys, config.k2)
        self.warnings: list[str] = []
        for j, sc in ((1, sced1), (2, sced2)):
            if sc.tie_warning:
                self.warnings.append(
                    f"ties at the series-{j} threshold: exceedance count differs from k{j}"
                )
        self.thr1, self.thr2 = sced1.threshold, sced2.threshold
        self.ind1 = sample.xs > self.thr1
        self.ind2 = sample.ys > self.thr2
        self.count1 = int(self.ind1.sum())
        self.count2 = int(self.ind2.sum())
        self.cum1 = np.cumsum(self.ind1) / config.k1
        self.cum2 = np.cumsum(self.ind2) / config.k2
        joint = self.ind1 & self.ind2
        self.cumj = np.cumsum(joint).astype(float)
        self.joint_count = int(self.cumj[-1])
        self.r_hat_11 = self.joint_count / config.k
        self.d1 = delta1(config, self.r_hat_11)
        self.sced1, self.sced2 = sced1, sced2
        self.g1 = self.g2 = None
        if with_hill:
            self.g1 = hill_full(sample.xs, config.k1)
            self.g2 = hill_full(sample.ys, config.k2)
            if self.g1.gamma_hat <= 0 or self.g2.gamma_hat <= 0:
                raise InsufficientExceedancesError(
                    "nonpositive Hill estimate; log contrast undefined"
                )

    def sup_sq_diff(self) -> float:
        """sup_z (C1_hat(z) - C2_hat(z))^2, exact over lattice points."""
        return float(np.max((self.cum1 - self.cum2) ** 2))

    def d3(self) -> float:
        return delta3(self.config, self.r_hat_11)

    def dependence_curve(self) -> np.ndarray:
        """D(z) = C1 + C2 - 2 R'(1,1;0,z)/R'(1,1) + (s1-s2)/Delta1 (C1 - C2)
        on the lattice; requires joint exceedances."""
        if self.joint_count == 0:
            raise DegenerateDependenceError(
                "R_hat(1,1) = 0: no joint tail exceedances, H40 unavailable"
            )
        coef = (self.config.s1 - self.config.s2) / self.d1 if self.config.k1 != self.config.k2 else 0.0
        return (
            self.cum1
            + self.cum2
            - 2.0 * self.cumj / self.joint_count
            + coef * (self.cum1 - self.cum2)
        )


class _SplitStats:
    """Even/odd split quantities: series-1 statistics from even-indexed x's,
    series-2 from odd-indexed y's, at half tail orders (so the two halves
    are independent)."""

    def __init__(self, sample: BivariateSample, config: TailConfig, with_hill: bool):
        self.warnings: list[str] = []
        xs, ys = sample.xs, sample.ys
        if sample.n % 2:
            xs, ys = xs[:-1], ys[:-1]
            self.warnings.append("odd sample size: last observation dropped for the split")
        # 1-indexed: evens are x_2, x_4, ...; odds are y_1, y_3, ...
        even_x = xs[1::2]
        odd_y = ys[0::2]
        self.m = even_x.shape[0]
        self.k1h = max(2, int(math.floor(config.k1 / 2 + 0.5)))
        self.k2h = max(2, int(math.floor(config.k2 / 2 + 0.5)))
        if self.k1h >= self.m or self.k2h >= self.m:
            raise ConfigurationError(
                f"half-sample orders {self.k1h}, {self.k2h} must be below m={self.m}"
            )
        sced1 = estimate_integrated_scedasis(even_x, self.k1h)
        sced2 = estimate_integrated_scedasis(odd_y, self.k2h)
        cum1 = np.cumsum(even_x > sced1.threshold) / self.k1h
        cum2 = np.cumsum(odd_y > sced2.threshold) / self.k2h
        self.sup_sq = float(np.max((cum1 - cum2) ** 2))
        self.d2 = delta2(config)
        self.t2 = config.k * self.sup_sq / self.d2
        self.g1 = self.g2 = None
        if with_hill:
            self.g1 = hill_full(even_x, self.k1h)
            self.g2 = hill_full(odd_y, self.k2h)
            if self.g1.gamma_hat <= 0 or self.g2.gamma_hat <= 0:
                raise InsufficientExceedancesError(
                    "nonpositive half-sample Hill estimate; log contrast undefined"
                )


def _reject_map(alphas: Sequence[float], rule: Callable[[float], bool]) -> dict:
    out = {}
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise ConfigurationError(f"significance level {a} outside (0, 1)")
        out[float(a)] = bool(rule(float(a)))
    return out


# ---------------------------------------------------------------------------
# asymptotic tests
# ---------------------------------------------------------------------------

def test_h10_asymptotic(
    sample: BivariateSample, config: TailConfig, alphas=DEFAULT_ALPHAS
) -> TestReport:
    """EVI equality: T1 = k (log g1_hat - log g2_hat)^2 / Delta1, chi-square(1)
    reference. An exactly-zero contrast short-circuits to p = 1 (covers the
    identical-series corner where Delta1 also degenerates)."""
    fs = _FullStats(sample, config, with_hill=True)
    num = config.k * (math.log(fs.g1.gamma_hat) - math.log(fs.g2.gamma_hat)) ** 2
    if num == 0.0:
        t1 = 0.0
    else:
        if fs.d1 <= 0:
            raise DegenerateDependenceError(
                f"Delta1 = {fs.d1:.3g} nonpositive; H10 normalization degenerate"
            )
        t1 = num / fs.d1
    p = 1.0 - chi_square_1_cdf(t1)
    return TestReport(
        hypothesis="H10",
        method=ASYMPTOTIC,
        statistic=t1,
        p_value=p,
        reject_at=_reject_map(alphas, lambda a: p < a),
        normalizers={"delta1": fs.d1},
        components={
            "gamma1_hat": fs.g1.gamma_hat,
            "gamma2_hat": fs.g2.gamma_hat,
            "r_hat_11": fs.r_hat_11,
        },
        warnings=list(fs.warnings),
    )


def test_h20_split(
    sample: BivariateSample, config: TailConfig, alphas=DEFAULT_ALPHAS
) -> TestReport:
    """Scedasis equality on independent halves:
    T2 = sup_z k (C1*(z) - C2*(z))^2 / Delta2, squared-Kolmogorov reference."""
    ss = _SplitStats(sample, config, with_hill=False)
    p = 1.0 - kolmogorov_sq_cdf(ss.t2)
    return TestReport(
        hypothesis="H20",
        method=ASYMPTOTIC,
        statistic=ss.t2,
        p_value=p,
        reject_at=_reject_map(alphas, lambda a: p < a),
        normalizers={"delta2": ss.d2},
        components={"sup_sq": ss.sup_sq, "half_orders": (ss.k1h, ss.k2h)},
        warnings=list(ss.warnings),
    )


def test_h30_split(
    sample: BivariateSample, config: TailConfig, alphas=DEFAULT_ALPHAS
) -> TestReport:
    """Joint EVI and scedasis equality: T3 is the larger of the two component
    CDF values; reject when T3 >= sqrt(1 - alpha)."""
    ss = _SplitStats(sample, config, with_hill=True)
    chi_stat = config.k * (math.log(ss.g1.gamma_hat) - math.log(ss.g2.gamma_hat)) ** 2 / ss.d2
    chi_comp = chi_square_1_cdf(chi_stat)
    ks_comp = kolmogorov_sq_cdf(ss.t2)
    t3 = max(chi_comp, ks_comp)
    p = 1.0 - t3 * t3
    return TestReport(
        hypothesis="H30",
        method=ASYMPTOTIC,
        statistic=t3,
        p_value=p,
        reject_at=_reject_map(alphas, lambda a: t3 >= math.sqrt(1.0 - a)),
        normalizers={"delta2": ss.d2},
        components={
            "chi_component": chi_comp,
            "ks_component": ks_comp,
            "chi_stat": chi_stat,
            "ks_stat": ss.t2,
        },
        warnings=list(ss.warnings),
    )


def test_h40_asymptotic(
    sample: BivariateSample, config: TailConfig, alphas=DEFAULT_ALPHAS
) -> TestReport:
    """Scedasis equality plus homogeneous tail dependence.

    KS1 = sup_z k (C1 - C2)^2 / Delta1,
    KS2 = sup_z k D(z)^2 / Delta3 with the dependence-centered contrast D;
    T4 = max(F_ks(KS1), F_ks(KS2)), reject when T4 >= sqrt(1 - alpha).
    """
    fs = _FullStats(sample, config, with_hill=False)
    d3 = fs.d3()
    if d3 <= 0:
        raise DegenerateDependenceError(
            f"Delta3 = {d3:.3g} nonpositive: estimate left the validity region"
        )
    sup_sq = fs.sup_sq_diff()
    if sup_sq == 0.0:
        ks1 = 0.0
    else:
        if fs.d1 <= 0:
            raise DegenerateDependenceError(
                f"Delta1 = {fs.d1:.3g} nonpositive; KS1 normalization degenerate"
            )
        ks1 = config.k * sup_sq / fs.d1
    dep = fs.dependence_curve()
    ks2 = config.k * float(np.max(dep**2)) / d3
    comp1 = kolmogorov_sq_cdf(ks1)
    comp2 = kolmogorov_sq_cdf(ks2)
    t4 = max(comp1, comp2)
    p = 1.0 - t4 * t4
    return TestReport(
        hypothesis="H40",
        method=ASYMPTOTIC,
        statistic=t4,
        p_value=p,
        reject_at=_reject_map(alphas, lambda a: t4 >= math.sqrt(1.0 - a)),
        normalizers={"delta1": fs.d1, "delta3": d3},
        components={
            "ks1": ks1,
            "ks2": ks2,
            "ks1_component": comp1,
            "ks2_component": comp2,
            "r_hat_11": fs.r_hat_11,
        },
        warnings=list(fs.warnings),
    )


# ---------------------------------------------------------------------------
# bootstrap tests
# ---------------------------------------------------------------------------

class _BootstrapEnsembles:
    """One multiplier-ensemble pass over the sample.

    Produces the replicate arrays

        T1^b  = (mu^2 k / sigma^2) ((log g1^b - log g2^b) - (log g1 - log g2))^2
        KS1^b = (mu^2 k / sigma^2) sup_z (C1^b - C2^b - C1 + C2)^2
        KS2^b = (mu^2 k / sigma^2) sup_z (D^b - D)^2

    together with the matching rescaled plain statistics Delta1*T1,
    Delta1*KS1 and Delta3*KS2. KS2 replicates without joint exceedances are
    dropped and counted.
    """

    def __init__(
        self,
        sample: BivariateSample,
        config: TailConfig,
        B: int,
        spec: MultiplierSpec,
        seed,
        need_t1: bool = True,
        need_ks2: bool = True,
    ):
        if B < 1:
            raise ConfigurationError(f"B must be >= 1, got {B}")
        fs = _FullStats(sample, config, with_hill=need_t1)
        self.fs = fs
        self.config = config
        self.B = B
        self.spec = spec
        self.seed = seed
        n = sample.n
        k, k1, k2 = config.k, config.k1, config.k2
        xs, ys = sample.xs, sample.ys

        ord1 = np.argsort(xs, kind="stable")
        ord2 = np.argsort(ys, kind="stable")
        xs_sorted, ys_sorted = xs[ord1], ys[ord2]
        last_eq1 = np.searchsorted(xs_sorted, xs_sorted, side="right") - 1
        last_eq2 = np.searchsorted(ys_sorted, ys_sorted, side="right") - 1

        scale = spec.mu**2 * k / spec.sigma**2
        dlog = 0.0
        logs_x = logs_y = None
        if need_t1:
            dlog = math.log(fs.g1.gamma_hat) - math.log(fs.g2.gamma_hat)
            logs_x = np.log(np.where(xs > 0, xs, 1.0))
            logs_y = np.log(np.where(ys > 0, ys, 1.0))
        coef = (config.s1 - config.s2) / fs.d1 if k1 != k2 else 0.0
        have_dep = need_ks2 and fs.joint_count > 0
        plain_dep = fs.dependence_curve() if have_dep else None

        t1 = np.empty(B) if need_t1 else None
        ks1 = np.empty(B)
        ks2 = np.full(B, np.nan)
        cdiff_plain = fs.cum1 - fs.cum2

        for b in range(1, B + 1):
            xi, xi_bar = draw_multipliers(spec, n, seed, b)
            w = xi / xi_bar
            thr1b = self._threshold(xs_sorted, w[ord1], last_eq1, fs.count1)
            thr2b = self._threshold(ys_sorted, w[ord2], last_eq2, fs.count2)
            ind1b = xs > thr1b
            ind2b = ys > thr2b
            c1b = np.cumsum(w * ind1b) / k1
            c2b = np.cumsum(w * ind2b) / k2
            ks1[b - 1] = scale * float(np.max((c1b - c2b - cdiff_plain) ** 2))

            if need_t1:
                if thr1b <= 0 or thr2b <= 0:
                    raise DomainError(
                        f"replicate {b}: nonpositive bootstrap threshold; log undefined"
                    )
                g1b = float(np.sum(w * (logs_x - math.log(thr1b)) * ind1b)) / fs.count1
                g2b = float(np.sum(w * (logs_y - math.log(thr2b)) * ind2b)) / fs.count2
                if g1b <= 0 or g2b <= 0:
                    raise DomainError(f"replicate {b}: nonpositive bootstrap Hill estimate")
                t1[b - 1] = scale * ((math.log(g1b) - math.log(g2b)) - dlog) ** 2

            if have_dep:
                jb = np.cumsum(w * (ind1b & ind2b))
                if jb[-1] > 0:
                    dep_b = c1b + c2b - 2.0 * jb / jb[-1] + coef * (c1b - c2b)
                    ks2[b - 1] = scale * float(np.max((dep_b - plain_dep) ** 2))

        self.t1 = t1
        self.ks1 = ks1
        self.ks2 = ks2
        self.ks2_failures = int(np.isnan(ks2).sum())
        # rescaled plain statistics entering the bootstrap comparisons
        self.d1_t1 = k * dlog**2 if need_t1 else math.nan
        self.d1_ks1 = k * fs.sup_sq_diff()
        self.d3_ks2 = k * float(np.max(plain_dep**2)) if have_dep else math.nan

    @staticmethod
    def _threshold(values_sorted, w_sorted, last_eq, bound) -> float:
        cw = np.cumsum(w_sorted)
        above = cw[-1] - cw[last_eq]
        tol = 1e-12 * max(1.0, bound)
        ok = above <= bound + tol
        return float(values_sorted[int(np.argmax(ok))])


def _ecdf(values: np.ndarray, x: float) -> float:
    return float(np.count_nonzero(values <= x)) / values.shape[0]


def _equantile(values: np.ndarray, alpha: float) -> float:
    srt = np.sort(values)
    idx = max(1, int(math.ceil(values.shape[0] * alpha)))
    return float(srt[idx - 1])


def _component_cdf(values: np.ndarray, stat: float) -> float:
    """Ensemble CDF value of one component statistic.

    An exactly-zero statistic means the null contrast vanishes identically
    (e.g. testing a series against itself); it carries no evidence, so its
    component value is 0 rather than F_hat(0). Continuous data hit zero with
    probability zero, so calibrated behavior is unchanged.
    """
    return 0.0 if stat == 0.0 else _ecdf(values, stat)


def test_h10_bootstrap(
    sample: BivariateSample,
    config: TailConfig,
    B: int = 200,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
    alphas=DEFAULT_ALPHAS,
) -> TestReport:
    """H10 by multiplier bootstrap: reject when Delta1*T1 reaches the upper
    empirical quantile of the centered replicate ensemble."""
    ens = _BootstrapEnsembles(sample, config, B, spec, seed, need_ks2=False)
    stat = ens.d1_t1
    p = 1.0 if stat == 0.0 else 1.0 - _ecdf(ens.t1, stat)
    return TestReport(
        hypothesis="H10",
        method=BOOTSTRAP,
        statistic=stat,
        p_value=p,
        reject_at=_reject_map(
            alphas, lambda a: stat > 0.0 and stat >= _equantile(ens.t1, 1.0 - a)
        ),
        normalizers={"delta1": ens.fs.d1},
        components={
            "gamma1_hat": ens.fs.g1.gamma_hat,
            "gamma2_hat": ens.fs.g2.gamma_hat,
            "B": B,
        },
        warnings=list(ens.fs.warnings),
    )


def test_h20_bootstrap(
    sample: BivariateSample,
    config: TailConfig,
    B: int = 200,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
    alphas=DEFAULT_ALPHAS,
) -> TestReport:
    """H20 by multiplier bootstrap on the full sample (no splitting)."""
    ens = _BootstrapEnsembles(sample, config, B, spec, seed, need_t1=False, need_ks2=False)
    stat = ens.d1_ks1
    p = 1.0 if stat == 0.0 else 1.0 - _ecdf(ens.ks1, stat)
    return TestReport(
        hypothesis="H20",
        method=BOOTSTRAP,
        statistic=stat,
        p_value=p,
        reject_at=_reject_map(
            alphas, lambda a: stat > 0.0 and stat >= _equantile(ens.ks1, 1.0 - a)
        ),
        normalizers={"delta1": ens.fs.d1},
        components={"B": B},
        warnings=list(ens.fs.warnings),
    )


def test_h30_bootstrap(
    sample: BivariateSample,
    config: TailConfig,
    B: int = 200,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
    alphas=DEFAULT_ALPHAS,
    exact_joint_quantile: bool = False,
) -> TestReport:
    """H30 by multiplier bootstrap: the criterion is the larger of the two
    ensemble CDF values at the rescaled plain statistics.

    The default threshold 1 - alpha/2 conservatively bounds the exact joint
    quantile; set ``exact_joint_quantile`` to use the joint ensemble instead.
    """
    ens = _BootstrapEnsembles(sample, config, B, spec, seed, need_ks2=False)
    c1 = _component_cdf(ens.t1, ens.d1_t1)
    c2 = _component_cdf(ens.ks1, ens.d1_ks1)
    crit = max(c1, c2)
    if exact_joint_quantile:
        joint = np.maximum(
            np.searchsorted(np.sort(ens.t1), ens.t1, side="right") / B,
            np.searchsorted(np.sort(ens.ks1), ens.ks1, side="right") / B,
        )
        rule = lambda a: crit >= _equantile(joint, 1.0 - a)
        p = 1.0 - _ecdf(joint, crit)
    else:
        rule = lambda a: crit >= 1.0 - a / 2.0
        p = min(1.0, 2.0 * (1.0 - crit))
    return TestReport(
        hypothesis="H30",
        method=BOOTSTRAP,
        statistic=crit,
        p_value=p,
        reject_at=_reject_map(alphas, rule),
        normalizers={"delta1": ens.fs.d1},
        components={
            "t1_component": c1,
            "ks1_component": c2,
            "B": B,
            "exact_joint_quantile": exact_joint_quantile,
        },
        warnings=list(ens.fs.warnings),
    )


def test_h40_bootstrap(
    sample: BivariateSample,
    config: TailConfig,
    B: int = 200,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
    alphas=DEFAULT_ALPHAS,
) -> TestReport:
    """H40 by multiplier bootstrap: larger of the KS1/KS2 ensemble CDF values
    against sqrt(1 - alpha). Replicates without joint exceedances are dropped
    (more than 10% aborts the test)."""
    ens = _BootstrapEnsembles(sample, config, B, spec, seed, need_t1=False)
    d3 = ens.fs.d3()
    if d3 <= 0:
        raise DegenerateDependenceError(
            f"Delta3 = {d3:.3g} nonpositive: estimate left the validity region"
        )
    if ens.ks2_failures > 0.1 * B:
        raise DegenerateDependenceError(
            f"{ens.ks2_failures}/{B} bootstrap replicates lack joint exceedances"
        )
    warnings = list(ens.fs.warnings)
    ks2_valid = ens.ks2[~np.isnan(ens.ks2)]
    if ens.ks2_failures:
        warnings.append(
            f"dropped {ens.ks2_failures}/{B} KS2 replicates without joint exceedances"
        )
    c1 = _component_cdf(ens.ks1, ens.d1_ks1)
    c2 = _component_cdf(ks2_valid, ens.d3_ks2)
    crit = max(c1, c2)
    p = 1.0 - crit * crit
    return TestReport(
        hypothesis="H40",
        method=BOOTSTRAP,
        statistic=crit,
        p_value=p,
        reject_at=_reject_map(alphas, lambda a: crit >= math.sqrt(1.0 - a)),
        normalizers={"delta1": ens.fs.d1, "delta3": d3},
        components={
            "ks1_component": c1,
            "ks2_component": c2,
            "ks2_failures": ens.ks2_failures,
            "B": B,
        },
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# one-shot runners
# ---------------------------------------------------------------------------

_ASYMPTOTIC_TESTS = {
    "H10": test_h10_asymptotic,
    "H20": test_h20_split,
    "H30": test_h30_split,
    "H40": test_h40_asymptotic,
}

_BOOTSTRAP_TESTS = {
    "H10": test_h10_bootstrap,
    "H20": test_h20_bootstrap,
    "H30": test_h30_bootstrap,
    "H40": test_h40_bootstrap,
}


def run_test(
    hypothesis: str,
    sample: BivariateSample,
    config: TailConfig,
    method: str = ASYMPTOTIC,
    B: int = 200,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
    alphas=DEFAULT_ALPHAS,
) -> TestReport:
    hypothesis = hypothesis.upper()
    if hypothesis not in HYPOTHESES:
        raise ConfigurationError(f"unknown hypothesis {hypothesis!r}")
    if method == ASYMPTOTIC:
        return _ASYMPTOTIC_TESTS[hypothesis](sample, config, alphas=alphas)
    if method == BOOTSTRAP:
        return _BOOTSTRAP_TESTS[hypothesis](
            sample, config, B=B, spec=spec, seed=seed, alphas=alphas
        )
    raise ConfigurationError(f"unknown method {method!r}")


def run_all_tests(
    sample: BivariateSample,
    config: TailConfig,
    method: str = ASYMPTOTIC,
    hypotheses: Sequence[str] = HYPOTHESES,
    B: int = 200,
    spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    seed=0,
    alphas=DEFAULT_ALPHAS,
) -> dict:
    """Run several hypotheses on one sample, sharing estimator passes.

    The bootstrap variant draws one multiplier ensemble and feeds every
    requested test, matching a single simulation of the replicate weights
    (per-hypothesis errors surface as exception values in the result map).
    """
    hypotheses = tuple(h.upper() for h in hypotheses)
    for h in hypotheses:
        if h not in HYPOTHESES:
            raise ConfigurationError(f"unknown hypothesis {h!r}")
    out: dict = {}
    if method == ASYMPTOTIC:
        for h in hypotheses:
            try:
                out[h] = _ASYMPTOTIC_TESTS[h](sample, config, alphas=alphas)
            except Exception as exc:  # recorded, not raised: callers tally failures
                out[h] = exc
        return out
    if method != BOOTSTRAP:
        raise ConfigurationError(f"unknown method {method!r}")

    need_t1 = any(h in ("H10", "H30") for h in hypotheses)
    need_ks2 = "H40" in hypotheses
    try:
        ens = _BootstrapEnsembles(
            sample, config, B, spec, seed, need_t1=need_t1, need_ks2=need_ks2
        )
    except Exception as exc:
        return {h: exc for h in hypotheses}

    def h10():
        stat = ens.d1_t1
        p = 1.0 if stat == 0.0 else 1.0 - _ecdf(ens.t1, stat)
        return TestReport(
            "H10", BOOTSTRAP, stat, p,
            _reject_map(alphas, lambda a: stat > 0.0 and stat >= _equantile(ens.t1, 1.0 - a)),
            normalizers={"delta1": ens.fs.d1},
            components={"B": B},
            warnings=list(ens.fs.warnings),
        )

    def h20():
        stat = ens.d1_ks1
        p = 1.0 if stat == 0.0 else 1.0 - _ecdf(ens.ks1, stat)
        return TestReport(
            "H20", BOOTSTRAP, stat, p,
            _reject_map(alphas, lambda a: stat > 0.0 and stat >= _equantile(ens.ks1, 1.0 - a)),
            normalizers={"delta1": ens.fs.d1},
            components={"B": B},
            warnings=list(ens.fs.warnings),
        )

    def h30():
        c1 = _component_cdf(ens.t1, ens.d1_t1)
        c2 = _component_cdf(ens.ks1, ens.d1_ks1)
        crit = max(c1, c2)
        p = min(1.0, 2.0 * (1.0 - crit))
        return TestReport(
            "H30", BOOTSTRAP, crit, p,
            _reject_map(alphas, lambda a: crit >= 1.0 - a / 2.0),
            normalizers={"delta1": ens.fs.d1},
            components={"t1_component": c1, "ks1_component": c2, "B": B},
            warnings=list(ens.fs.warnings),
        )

    def h40():
        d3 = ens.fs.d3()
        if d3 <= 0:
            raise DegenerateDependenceError(
                f"Delta3 = {d3:.3g} nonpositive: estimate left the validity region"
            )
        if ens.ks2_failures > 0.1 * B:
            raise DegenerateDependenceError(
                f"{ens.ks2_failures}/{B} bootstrap replicates lack joint exceedances"
            )
        ks2_valid = ens.ks2[~np.isnan(ens.ks2)]
        warns = list(ens.fs.warnings)
        if ens.ks2_failures:
            warns.append(
                f"dropped {ens.ks2_failures}/{B} KS2 replicates without joint exceedances"
            )
        c1 = _component_cdf(ens.ks1, ens.d1_ks1)
        c2 = _component_cdf(ks2_valid, ens.d3_ks2)
        crit = max(c1, c2)
        return TestReport(
            "H40", BOOTSTRAP, crit, 1.0 - crit * crit,
            _reject_map(alphas, lambda a: crit >= math.sqrt(1.0 - a)),
            normalizers={"delta1": ens.fs.d1, "delta3": d3},
            components={
                "ks1_component": c1,
                "ks2_component": c2,
                "ks2_failures": ens.ks2_failures,
                "B": B,
            },
            warnings=warns,
        )

    builders = {"H10": h10, "H20": h20, "H30": h30, "H40": h40}
    for h in hypotheses:
        try:
            out[h] = builders[h]()
        except Exception as exc:
            out[h] = exc
    return out

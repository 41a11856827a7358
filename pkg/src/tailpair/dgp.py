"""Synthetic data-generating processes and the rejection-frequency harness.

Each DGP pairs Frechet-type marginals

    F_i^(j)(t) = exp( -(t / c_j(i/n)^gamma_j)^(-1/gamma_j) ),  t > 0,

whose tail ratio against the unit (c == 1) reference law is exactly
c_j(i/n), with a per-index mixture copula: with probability h(i/n) the
uniform pair comes from a t copula (df 1 by default), otherwise the
coordinates are independent.

Built-in ingredient families (all integrate/normalize as required):

    c_const(x)  = 1
    c_tent(x)   = 2x + 0.5 on [0, .5], 2.5 - 2x on [.5, 1]
    c_spike(x)  = 0.8 off (0.4, 0.6), peaking at 2.8 in the middle
    h_const(x)  = 1
    h_tent(x)   = 2x on [0, .5), 2 - 2x on [.5, 1]

The 18 catalog entries combine gamma in {0.5, 1, 2} with these families; see
DGP_TABLE. Seeding is hierarchical: a master seed spawns one stream per
dataset, and within a dataset the mixture Bernoullis, the copula pairs and
the independent pairs each use their own substream, so results are
bit-reproducible under any execution order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from .bootstrap import STANDARD_EXPONENTIAL, MultiplierSpec
from .exceptions import ConfigurationError, DomainError
from .refmodels import (
    C1_CONST,
    C2_TENT,
    C3_SPIKE,
    H1_CONST,
    H2_TENT,
    MixtureProbabilityFunction,
    ScedasisFunction,
)
from .sample import BivariateSample, TailConfig
from .twosample import (
    ASYMPTOTIC,
    BOOTSTRAP,
    DEFAULT_ALPHAS,
    HYPOTHESES,
    run_all_tests,
)

SCEDASIS_BY_NAME = {"const": C1_CONST, "tent": C2_TENT, "spike": C3_SPIKE}
MIXTURE_BY_NAME = {"const": H1_CONST, "tent": H2_TENT}


@dataclass(frozen=True)
class CopulaSpec:
    family: str = "T_COPULA"
    df: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if self.family not in ("T_COPULA", "INDEPENDENCE"):
            raise ConfigurationError(f"unknown copula family {self.family!r}")
        if self.family == "T_COPULA" and not (-1.0 < self.rho < 1.0 and self.df > 0):
            raise ConfigurationError(f"invalid t copula df={self.df}, rho={self.rho}")


@dataclass(frozen=True)
class DgpSpec:
    gamma1: float
    gamma2: float
    c1: ScedasisFunction
    c2: ScedasisFunction
    h: MixtureProbabilityFunction
    copula: CopulaSpec = field(default_factory=CopulaSpec)
    id: Optional[int] = None

    def __post_init__(self):
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ConfigurationError("extreme value indices must be positive")


# (gamma1, gamma2, c1, c2, h) for catalog entries 1..18
DGP_TABLE = {
    1: (1.0, 1.0, "const", "const", "const"),
    2: (1.0, 1.0, "const", "const", "tent"),
    3: (2.0, 2.0, "tent", "tent", "const"),
    4: (2.0, 2.0, "tent", "tent", "tent"),
    5: (0.5, 0.5, "spike", "spike", "const"),
    6: (0.5, 0.5, "spike", "spike", "tent"),
    7: (1.0, 1.0, "const", "tent", "const"),
    8: (1.0, 1.0, "const", "tent", "tent"),
    9: (2.0, 2.0, "const", "spike", "const"),
    10: (2.0, 2.0, "const", "spike", "tent"),
    11: (0.5, 0.5, "tent", "spike", "const"),
    12: (0.5, 0.5, "tent", "spike", "tent"),
    13: (1.0, 2.0, "const", "const", "const"),
    14: (1.0, 2.0, "const", "const", "tent"),
    15: (1.0, 0.5, "tent", "tent", "const"),
    16: (1.0, 0.5, "tent", "tent", "tent"),
    17: (2.0, 0.5, "spike", "spike", "const"),
    18: (2.0, 0.5, "spike", "spike", "tent"),
}


def dgp_from_table(dgp_id: int, rho: float = 0.0, df: float = 1.0) -> DgpSpec:
    if dgp_id not in DGP_TABLE:
        raise ConfigurationError(f"DGP id must be in 1..18, got {dgp_id}")
    g1, g2, c1, c2, h = DGP_TABLE[dgp_id]
    return DgpSpec(
        gamma1=g1,
        gamma2=g2,
        c1=SCEDASIS_BY_NAME[c1],
        c2=SCEDASIS_BY_NAME[c2],
        h=MIXTURE_BY_NAME[h],
        copula=CopulaSpec("T_COPULA", df=df, rho=rho),
        id=dgp_id,
    )


# ---------------------------------------------------------------------------
# marginals and copula sampling
# ---------------------------------------------------------------------------

def frechet_marginal_quantile(u: float, gamma: float, c_val: float) -> float:
    """Inverse of F(t) = exp(-(t / c^gamma)^(-1/gamma)): t = c^gamma (-log u)^(-gamma)."""
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie strictly inside (0, 1), got {u}")
    if gamma <= 0 or c_val <= 0:
        raise DomainError("gamma and c must be positive")
    return c_val**gamma * (-math.log(u)) ** (-gamma)


def frechet_marginal_cdf(t, gamma: float, c_val) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.where(t > 0, np.exp(-((np.maximum(t, 1e-300) / np.asarray(c_val) ** gamma) ** (-1.0 / gamma))), 0.0)
    return out


def _frechet_quantile_vec(u: np.ndarray, gamma: float, c_vals: np.ndarray) -> np.ndarray:
    u = np.clip(u, 1e-300, 1.0 - 1e-16)
    return c_vals**gamma * (-np.log(u)) ** (-gamma)


def sample_t_copula_pair(rho: float, rng: np.random.Generator, size=None, df: float = 1.0):
    """Uniform pairs from a t copula: correlated normals over a shared
    chi-square draw, mapped through the Student-t distribution function
    (arctan closed form when df = 1)."""
    if not -1.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    m = 1 if size is None else int(size)
    z1 = rng.standard_normal(m)
    z2 = rho * z1 + math.sqrt(1.0 - rho * rho) * rng.standard_normal(m)
    s = rng.chisquare(df, m)
    scale = np.sqrt(s / df)
    t1, t2 = z1 / scale, z2 / scale
    if df == 1.0:
        u = 0.5 + np.arctan(t1) / np.pi
        v = 0.5 + np.arctan(t2) / np.pi
    else:
        u = sps.t.cdf(t1, df)
        v = sps.t.cdf(t2, df)
    if size is None:
        return float(u[0]), float(v[0])
    return u, v


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)):
        return np.random.SeedSequence(int(seed))
    return np.random.SeedSequence([int(s) for s in seed])


def simulate_dgp(spec: DgpSpec, n: int, seed) -> BivariateSample:
    """Draw n paired losses: per-index Bernoulli(h(i/n)) mixture between the
    t copula and independence, then invert through the Frechet-type
    marginals at c_j(i/n)."""
    if n < 4:
        raise ConfigurationError(f"n must be at least 4, got {n}")
    ss = _seed_sequence(seed)
    bern_ss, cop_ss, ind_ss = ss.spawn(3)
    t = np.arange(1, n + 1) / n
    h_vals = np.asarray(spec.h(t), dtype=float)

    mix = np.random.default_rng(bern_ss).random(n) < h_vals
    if spec.copula.family == "T_COPULA":
        u_dep, v_dep = sample_t_copula_pair(
            spec.copula.rho, np.random.default_rng(cop_ss), size=n, df=spec.copula.df
        )
    else:
        rng_cop = np.random.default_rng(cop_ss)
        u_dep, v_dep = rng_cop.random(n), rng_cop.random(n)
    rng_ind = np.random.default_rng(ind_ss)
    u_ind, v_ind = rng_ind.random(n), rng_ind.random(n)

    u = np.where(mix, u_dep, u_ind)
    v = np.where(mix, v_dep, v_ind)
    xs = _frechet_quantile_vec(u, spec.gamma1, np.asarray(spec.c1(t), dtype=float))
    ys = _frechet_quantile_vec(v, spec.gamma2, np.asarray(spec.c2(t), dtype=float))
    return BivariateSample(xs=xs, ys=ys)


# ---------------------------------------------------------------------------
# Monte Carlo rejection-frequency harness
# ---------------------------------------------------------------------------

@dataclass
class MonteCarloResult:
    """Rejection frequencies per (hypothesis, alpha, method) plus per-
    hypothesis failure counts; half-widths are binomial at 95%."""

    dgp: DgpSpec
    n: int
    config: TailConfig
    reps: int
    B: Optional[int]
    methods: tuple
    alphas: tuple
    hypotheses: tuple
    rejection_frequency: dict
    failures: dict
    seed: int

    def successes(self, hypothesis: str, method: str) -> int:
        return self.reps - self.failures.get((hypothesis, method), 0)

    def half_width(self, hypothesis: str, alpha: float, method: str) -> float:
        f = self.rejection_frequency[(hypothesis, float(alpha), method)]
        m = self.successes(hypothesis, method)
        if m <= 0:
            return math.nan
        return 1.96 * math.sqrt(f * (1.0 - f) / m)


def _study_one_rep(args):
    (spec, n, config, alphas, methods, hypotheses, B, mult_spec, seed, rep) = args
    sample = simulate_dgp(spec, n, (seed, rep))
    rejections = {}
    fails = {}
    for method in methods:
        reports = run_all_tests(
            sample,
            config,
            method=method,
            hypotheses=hypotheses,
            B=B,
            spec=mult_spec,
            seed=(seed, rep),
            alphas=alphas,
        )
        for h, rep_or_exc in reports.items():
            if isinstance(rep_or_exc, Exception):
                fails[(h, method)] = repr(rep_or_exc)
            else:
                for a in alphas:
                    rejections[(h, float(a), method)] = rep_or_exc.reject_at[float(a)]
    return rejections, fails


def run_rejection_study(
    spec: DgpSpec,
    n: int,
    config: TailConfig,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
    reps: int = 1000,
    method: str = ASYMPTOTIC,
    B: int = 200,
    seed: int = 0,
    hypotheses: Sequence[str] = HYPOTHESES,
    multiplier_spec: MultiplierSpec = STANDARD_EXPONENTIAL,
    n_jobs: int = 1,
) -> MonteCarloResult:
    """Simulate ``reps`` datasets and tabulate rejection frequencies.

    Dataset r uses the derived seed (seed, r) for both data and bootstrap
    streams, so any n_jobs produces identical tables. ``method`` may be
    "asymptotic", "bootstrap" or "both". Individual test failures are
    counted per hypothesis and excluded from the frequency denominator.
    """
    if reps < 1:
        raise ConfigurationError(f"reps must be >= 1, got {reps}")
    config.validate_for(n)
    methods = (ASYMPTOTIC, BOOTSTRAP) if method == "both" else (method,)
    for m in methods:
        if m not in (ASYMPTOTIC, BOOTSTRAP):
            raise ConfigurationError(f"unknown method {m!r}")
    alphas = tuple(float(a) for a in alphas)
    hypotheses = tuple(h.upper() for h in hypotheses)

    tasks = [
        (spec, n, config, alphas, methods, hypotheses, B, multiplier_spec, seed, rep)
        for rep in range(reps)
    ]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_study_one_rep, tasks, chunksize=max(1, reps // (8 * n_jobs))))
    else:
        results = [_study_one_rep(t) for t in tasks]

    reject_counts: dict = {}
    success_counts: dict = {}
    failures: dict = {}
    for rejections, fails in results:
        for key, rejected in rejections.items():
            reject_counts[key] = reject_counts.get(key, 0) + int(rejected)
            success_counts[key] = success_counts.get(key, 0) + 1
        for key in fails:
            failures[key] = failures.get(key, 0) + 1

    frequency = {}
    for h in hypotheses:
        for m in methods:
            for a in alphas:
                key = (h, a, m)
                good = success_counts.get(key, 0)
                frequency[key] = reject_counts.get(key, 0) / good if good else math.nan
    return MonteCarloResult(
        dgp=spec,
        n=n,
        config=config,
        reps=reps,
        B=B if BOOTSTRAP in methods else None,
        methods=methods,
        alphas=alphas,
        hypotheses=hypotheses,
        rejection_frequency=frequency,
        failures={k: v for k, v in failures.items()},
        seed=seed,
    )

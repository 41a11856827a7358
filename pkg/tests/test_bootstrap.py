import math

import numpy as np
import pytest

from tailpair.bootstrap import (
    STANDARD_EXPONENTIAL,
    BootstrapEnsemble,
    MultiplierSpec,
    bootstrap_hill,
    bootstrap_quasi_tail_copula,
    bootstrap_scedasis,
    bootstrap_scedasis_curve,
    draw_multipliers,
    run_ensemble,
    weighted_quantile_fn,
    weighted_tail_quantile,
)
from tailpair.dgp import dgp_from_table, simulate_dgp
from tailpair.estimators import estimate_integrated_scedasis, estimate_quasi_tail_copula, hill_full
from tailpair.exceptions import ConfigurationError, DomainError
from tailpair.sample import BivariateSample, TailConfig, tail_threshold

E = math.e
ONES = MultiplierSpec("CUSTOM", mu=1.0, sigma=1.0, sampler=lambda rng, n: np.ones(n))


class TestDrawMultipliers:
    def test_exponential_moments(self):
        xi, xi_bar = draw_multipliers(STANDARD_EXPONENTIAL, 100_000, seed=1, b=1)
        assert abs(xi.mean() - 1.0) < 0.02
        assert abs(xi.std() - 1.0) < 0.02
        assert xi_bar == pytest.approx(xi.mean())

    def test_determinism(self):
        a, _ = draw_multipliers(STANDARD_EXPONENTIAL, 500, seed=9, b=3)
        b, _ = draw_multipliers(STANDARD_EXPONENTIAL, 500, seed=9, b=3)
        c, _ = draw_multipliers(STANDARD_EXPONENTIAL, 500, seed=9, b=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_constant_custom(self):
        xi, xi_bar = draw_multipliers(ONES, 50, seed=0, b=1)
        assert np.all(xi == 1.0) and xi_bar == 1.0

    def test_nonpositive_mean_resamples(self):
        flip = MultiplierSpec(
            "CUSTOM", mu=1.0, sigma=1.0,
            sampler=lambda rng, n: np.full(n, -1.0) if rng.random() < 0.7 else np.ones(n),
        )
        xi, xi_bar = draw_multipliers(flip, 20, seed=5, b=2)
        assert xi_bar > 0

    def test_invalid_spec(self):
        with pytest.raises(ConfigurationError):
            MultiplierSpec(mu=1.0, sigma=0.0)
        with pytest.raises(ConfigurationError):
            MultiplierSpec("CUSTOM", mu=1.0, sigma=1.0)


class TestWeightedTailQuantile:
    def test_hand_example(self):
        fn = weighted_quantile_fn([1.0, 5.0, 3.0, 9.0], np.ones(4), k_j=2)
        assert weighted_tail_quantile(fn, 2 / 4) == 3.0

    def test_unit_weights_reduce_to_tail_threshold(self, rng):
        vals = rng.standard_exponential(40)
        w = np.ones(40)
        for k in range(1, 40):
            fn = weighted_quantile_fn(vals, w, k_j=k)
            assert weighted_tail_quantile(fn, k / 40) == tail_threshold(vals, k)

    def test_weight_scale_invariance(self, rng):
        vals = rng.standard_exponential(60)
        xi = rng.standard_exponential(60)
        q1 = weighted_tail_quantile(weighted_quantile_fn(vals, xi, 7), 7 / 60)
        q2 = weighted_tail_quantile(weighted_quantile_fn(vals, 5.0 * xi, 7), 7 / 60)
        assert q1 == q2

    def test_boundary_error(self, rng):
        vals = rng.standard_exponential(20)
        fn = weighted_quantile_fn(vals, np.ones(20), 5)
        with pytest.raises(DomainError):
            weighted_tail_quantile(fn, 1.5)  # beyond the realized range of S
        with pytest.raises(DomainError):
            weighted_tail_quantile(fn, -0.1)


class TestBootstrapScedasis:
    def test_unit_multipliers_identity(self, rng):
        vals = rng.pareto(1.0, 120) + 1.0
        plain = estimate_integrated_scedasis(vals, 15)
        ones = np.ones(120)
        zs = np.linspace(0.01, 1.0, 157)
        curve = bootstrap_scedasis_curve(vals, 15, ones)
        assert np.allclose(curve(zs), plain(zs), atol=1e-12)
        assert bootstrap_scedasis(vals, 15, ones, 0.5) == plain(0.5)

    def test_hand_weighted_sum(self):
        # values [1,5,3,9], k=2, xi = (2,1,1,0): threshold stays within the
        # sample; exceedance weights over k give the curve at z = 1
        vals = np.array([1.0, 5.0, 3.0, 9.0])
        xi = np.array([2.0, 1.0, 1.0, 0.0])
        qfn = weighted_quantile_fn(vals, xi, 2)
        thr = weighted_tail_quantile(qfn, 2 / 4)
        w = xi / xi.mean()
        expected = float(np.sum(w * (vals > thr))) / 2
        assert bootstrap_scedasis(vals, 2, xi, 1.0) == pytest.approx(expected, abs=1e-15)

    def test_replicate_sd_matches_limit_under_dgp1(self):
        # sd over B of sqrt(k) * (C^b(1/2) - C_hat(1/2)) targets
        # sqrt(C(1-C)) = 0.5 for equal orders (s = 1)
        n, k, B = 5000, 500, 2000
        sample = simulate_dgp(dgp_from_table(1), n, seed=31)
        vals = sample.xs
        plain = estimate_integrated_scedasis(vals, k)(0.5)
        reps = np.empty(B)
        for b in range(1, B + 1):
            xi, _ = draw_multipliers(STANDARD_EXPONENTIAL, n, seed=17, b=b)
            reps[b - 1] = bootstrap_scedasis(vals, k, xi, 0.5)
        sd = math.sqrt(k) * reps.std()
        assert abs(sd - 0.5) / 0.5 < 0.15


class TestBootstrapQuasiTailCopula:
    def test_unit_multipliers_identity(self, toy_sample, toy_config):
        ones = np.ones(4)
        val = bootstrap_quasi_tail_copula(toy_sample, toy_config, ones, 1.0, 1.0)
        assert val == estimate_quasi_tail_copula(toy_sample, toy_config, 1.0, 1.0)

    def test_unit_multipliers_identity_random(self, rng):
        s = BivariateSample(rng.pareto(1, 90) + 1, rng.pareto(1, 90) + 1)
        cfg = TailConfig(k=9, k1=9, k2=6)
        ones = np.ones(90)
        # integer k_j * arg keeps the plain and weighted thresholds aligned
        for x, y in [(1.0, 1.0), (2.0, 0.5), (1 / 3, 1.0)]:
            assert bootstrap_quasi_tail_copula(s, cfg, ones, x, y) == pytest.approx(
                estimate_quasi_tail_copula(s, cfg, x, y), abs=1e-12
            )

    def test_additive_over_windows(self, rng):
        s = BivariateSample(rng.pareto(1, 100) + 1, rng.pareto(1, 100) + 1)
        cfg = TailConfig(k=10, k1=10, k2=10)
        xi, _ = draw_multipliers(STANDARD_EXPONENTIAL, 100, seed=3, b=1)
        z1, z2, z3 = 0.0, 0.513, 1.0
        a = bootstrap_quasi_tail_copula(s, cfg, xi, 1, 1, z1, z2)
        b = bootstrap_quasi_tail_copula(s, cfg, xi, 1, 1, z2, z3)
        c = bootstrap_quasi_tail_copula(s, cfg, xi, 1, 1, z1, z3)
        assert a + b == pytest.approx(c, abs=1e-12)

    def test_hand_weighted_example(self, toy_sample, toy_config):
        xi = np.array([2.0, 1.0, 1.0, 0.0])
        # xi_bar = 1; weighted thresholds: x-threshold 1, y-threshold 2;
        # joint exceedances at i=2 (w=1) and i=4 (w=0) -> sum 1, over k=2
        val = bootstrap_quasi_tail_copula(toy_sample, toy_config, xi, 1.0, 1.0)
        assert val == pytest.approx(0.5, abs=1e-15)


class TestBootstrapHill:
    def test_unit_multipliers_full_window(self, rng):
        vals = rng.pareto(0.8, 300) + 1.0
        k = 40
        sced = estimate_integrated_scedasis(vals, k)
        ones = np.ones(300)
        assert bootstrap_hill(vals, k, sced, ones) == pytest.approx(
            hill_full(vals, k).gamma_hat, abs=1e-12
        )

    def test_toy_example(self):
        vals = [1.0, E, E**2, E**3]
        sced = estimate_integrated_scedasis(vals, 2)
        assert bootstrap_hill(vals, 2, sced, np.ones(4)) == pytest.approx(1.5, abs=1e-14)

    def test_replicate_sd_matches_gamma_limit(self):
        # sd of sqrt(k) (g^b - g_hat) targets gamma * sqrt(s_j) = 1 under
        # DGP 1 with k_j = k
        n, k, B = 5000, 500, 2000
        sample = simulate_dgp(dgp_from_table(1), n, seed=77)
        vals = sample.ys
        sced = estimate_integrated_scedasis(vals, k)
        reps = np.empty(B)
        for b in range(1, B + 1):
            xi, _ = draw_multipliers(STANDARD_EXPONENTIAL, n, seed=19, b=b)
            reps[b - 1] = bootstrap_hill(vals, k, sced, xi)
        sd = math.sqrt(k) * reps.std()
        assert abs(sd - 1.0) < 0.15

    def test_nonpositive_threshold_rejected(self):
        vals = np.array([-3.0, -2.0, -1.0, -0.5, 1.0, 2.0])
        sced = estimate_integrated_scedasis(vals, 5)
        with pytest.raises(DomainError):
            bootstrap_hill(vals, 5, sced, np.ones(6))


class TestRunEnsemble:
    def test_singleton_centered_statistic(self, rng):
        vals = rng.pareto(1.0, 200) + 1.0
        k = 25
        sced = estimate_integrated_scedasis(vals, k)
        plain = hill_full(vals, k).gamma_hat

        def stat(xi):
            return math.sqrt(k) * (bootstrap_hill(vals, k, sced, xi) - plain)

        ens = run_ensemble(stat, n=200, B=1, spec=ONES, seed=4)
        assert ens.replicates.shape == (1,)
        assert ens.replicates[0] == pytest.approx(0.0, abs=1e-12)

    def test_determinism(self, rng):
        vals = rng.pareto(1.0, 150) + 1.0
        sced = estimate_integrated_scedasis(vals, 20)

        def stat(xi):
            return bootstrap_hill(vals, 20, sced, xi)

        e1 = run_ensemble(stat, n=150, B=50, seed=11)
        e2 = run_ensemble(stat, n=150, B=50, seed=11)
        assert np.array_equal(e1.replicates, e2.replicates)

    def test_ecdf_at_median(self, rng):
        reps = rng.normal(size=101)
        ens = BootstrapEnsemble(replicates=reps, spec=STANDARD_EXPONENTIAL, seed=0, B=101)
        med = float(np.median(reps))
        assert abs(ens.empirical_cdf(med) - 0.5) <= 1.0 / 101 + 1e-12

    def test_quantile_convention(self):
        ens = BootstrapEnsemble(
            replicates=np.arange(1.0, 11.0), spec=STANDARD_EXPONENTIAL, seed=0, B=10
        )
        # smallest v with F_hat(v) >= alpha
        assert ens.quantile(0.95) == 10.0
        assert ens.quantile(0.90) == 9.0
        assert ens.quantile(0.05) == 1.0

    def test_error_carries_replicate_index(self, rng):
        def stat(xi):
            raise ValueError("boom")

        with pytest.raises(ValueError, match="replicate 1"):
            run_ensemble(stat, n=10, B=3, seed=0)


class TestCoverage:
    def test_bootstrap_interval_covers_true_gamma(self):
        # basic bootstrap interval from the centered replicate law; desk-scale
        # coverage check per the module contract
        n, k, B, reps = 2000, 200, 200, 300
        spec = dgp_from_table(1)
        hits = 0
        for r in range(reps):
            sample = simulate_dgp(spec, n, seed=(606, r))
            vals = sample.xs
            sced = estimate_integrated_scedasis(vals, k)
            g = hill_full(vals, k).gamma_hat
            d = np.empty(B)
            for b in range(1, B + 1):
                xi, _ = draw_multipliers(STANDARD_EXPONENTIAL, n, seed=(707, r), b=b)
                d[b - 1] = math.sqrt(k) * (bootstrap_hill(vals, k, sced, xi) - g)
            lo = g - np.quantile(d, 0.975) / math.sqrt(k)
            hi = g - np.quantile(d, 0.025) / math.sqrt(k)
            hits += lo <= 1.0 <= hi
        coverage = hits / reps
        assert abs(coverage - 0.95) <= 0.04

"""tailpair: estimation, multiplier-bootstrap inference and two-sample tail
tests for paired heavy-tailed series with time-varying scale ("scedasis")
and a time-varying tail-dependence mixture."""

from .sample import BivariateSample, StepFunction, TailConfig, order_statistic, tail_threshold, count_joint_exceedances
from .estimators import (
    HillEstimate,
    QuasiTailCopulaEstimate,
    ScedasisEstimate,
    delta1,
    delta2,
    delta3,
    estimate_hill_subsample,
    estimate_integrated_scedasis,
    estimate_quasi_tail_copula,
    hill_full,
    tail_dependence_diagnostic,
)
from .refmodels import (
    C1_CONST,
    C2_TENT,
    C3_SPIKE,
    H1_CONST,
    H2_TENT,
    AsymptoticCovariance,
    MixtureProbabilityFunction,
    ScedasisFunction,
    TailCopulaModel,
    clayton_model,
    asymptotic_covariance_blocks,
    eval_quasi_tail_copula,
    eval_quasi_tail_copula_partial,
    independence_model,
    t_copula_model,
    t_copula_tail_dependence,
)
from .bootstrap import (
    BootstrapEnsemble,
    MultiplierSpec,
    STANDARD_EXPONENTIAL,
    WeightedTailQuantileFn,
    bootstrap_hill,
    bootstrap_quasi_tail_copula,
    bootstrap_scedasis,
    bootstrap_scedasis_curve,
    draw_multipliers,
    run_ensemble,
    weighted_quantile_fn,
    weighted_tail_quantile,
)
from .twosample import (
    CHI_SQUARE_1,
    KOLMOGOROV_SQ,
    HYPOTHESES,
    ReferenceDistribution,
    TestReport,
    chi_square_1_cdf,
    kolmogorov_sq_cdf,
    run_all_tests,
    run_test,
    test_h10_asymptotic,
    test_h10_bootstrap,
    test_h20_bootstrap,
    test_h20_split,
    test_h30_bootstrap,
    test_h30_split,
    test_h40_asymptotic,
    test_h40_bootstrap,
)
from .dgp import (
    DGP_TABLE,
    CopulaSpec,
    DgpSpec,
    MonteCarloResult,
    dgp_from_table,
    frechet_marginal_quantile,
    run_rejection_study,
    sample_t_copula_pair,
    simulate_dgp,
)
from .returns import ReturnSeries, align_pair, load_returns_csv
from .pairwise import PairwiseReport, default_order, run_pairwise_analysis

__version__ = "0.1.0"

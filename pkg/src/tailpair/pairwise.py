"""All-pairs analysis of a basket of return series: the four tests per
unordered pair, per-series Hill estimates and per-pair tail-dependence
diagnostics, assembled into symmetric p-value matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bootstrap import STANDARD_EXPONENTIAL, MultiplierSpec
from .estimators import hill_full, tail_dependence_diagnostic
from .exceptions import ConfigurationError, DataValidationError
from .returns import ReturnSeries, align_pair
from .sample import TailConfig
from .twosample import BOOTSTRAP, DEFAULT_ALPHAS, HYPOTHESES, run_all_tests

DEFAULT_K_FRACTION = 0.08


@dataclass
class PairwiseReport:
    """Symmetric p-value matrix per hypothesis (NaN diagonal), per-series
    tail summaries, per-pair dependence diagnostics and the configuration
    echo needed to reproduce the run."""

    symbols: list
    p_matrices: dict
    diagnostics: np.ndarray
    per_series: list
    config: dict
    warnings: list = field(default_factory=list)


def default_order(n: int, k_fraction: float = DEFAULT_K_FRACTION) -> int:
    """Documented convention for empirical data: k = floor(k_fraction * n)."""
    k = int(math.floor(k_fraction * n))
    return max(2, k)


def run_pairwise_analysis(
    series: Sequence[ReturnSeries],
    method: str = BOOTSTRAP,
    B: int = 500,
    seed: int = 0,
    alphas=DEFAULT_ALPHAS,
    k: Optional[int] = None,
    k1: Optional[int] = None,
    k2: Optional[int] = None,
    k_fraction: float = DEFAULT_K_FRACTION,
    min_overlap: int = 100,
    multiplier_spec: MultiplierSpec = STANDARD_EXPONENTIAL,
) -> PairwiseReport:
    """Test every unordered pair. Pair (i, j) with i < j reuses its result
    for (j, i), so the matrices are symmetric by construction; per-pair
    failures are recorded as warnings (and NaN entries), not raised.

    Tail orders default to floor(k_fraction * n) per aligned pair (and per
    series for the marginal Hill estimates); explicit k/k1/k2 override.
    """
    series = list(series)
    if len(series) < 2:
        raise ConfigurationError("pairwise analysis needs at least 2 series")
    symbols = [s.symbol for s in series]
    if len(set(symbols)) != len(symbols):
        raise DataValidationError(f"duplicate symbols in input: {symbols}")
    m = len(series)
    warnings: list[str] = []

    per_series = []
    for s in series:
        ks = k1 if k1 is not None else default_order(s.n, k_fraction)
        entry = {"symbol": s.symbol, "n": s.n, "k": ks}
        try:
            entry["hill"] = hill_full(s.losses, ks).gamma_hat
        except Exception as exc:
            entry["hill"] = math.nan
            warnings.append(f"{s.symbol}: Hill estimate failed: {exc!r}")
        per_series.append(entry)

    p_matrices = {h: np.full((m, m), np.nan) for h in HYPOTHESES}
    diagnostics = np.full((m, m), np.nan)
    for i in range(m):
        for j in range(i + 1, m):
            pair_idx = i * m + j
            try:
                sample = align_pair(series[i], series[j], min_overlap=min_overlap)
                n = sample.n
                ka = k1 if k1 is not None else default_order(n, k_fraction)
                kb = k2 if k2 is not None else default_order(n, k_fraction)
                kk = k if k is not None else max(ka, kb)
                config = TailConfig(k=kk, k1=ka, k2=kb)
                diagnostics[i, j] = diagnostics[j, i] = tail_dependence_diagnostic(
                    sample, config
                )
                reports = run_all_tests(
                    sample,
                    config,
                    method=method,
                    B=B,
                    spec=multiplier_spec,
                    seed=(seed, pair_idx),
                    alphas=alphas,
                )
                for h, rep in reports.items():
                    if isinstance(rep, Exception):
                        warnings.append(f"{symbols[i]}/{symbols[j]} {h}: {rep!r}")
                    else:
                        p_matrices[h][i, j] = p_matrices[h][j, i] = rep.p_value
            except Exception as exc:
                warnings.append(f"{symbols[i]}/{symbols[j]}: {exc!r}")

    return PairwiseReport(
        symbols=symbols,
        p_matrices=p_matrices,
        diagnostics=diagnostics,
        per_series=per_series,
        config={
            "method": method,
            "B": B,
            "seed": seed,
            "alphas": list(alphas),
            "k": k,
            "k1": k1,
            "k2": k2,
            "k_fraction": k_fraction,
            "min_overlap": min_overlap,
        },
        warnings=warnings,
    )

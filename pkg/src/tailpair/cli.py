"""Command-line interface.

Subcommands: simulate, estimate, test, study, pairwise. Outputs are CSV
tables and JSON reports (plus PNG figures unless --no-figures); all writes
are atomic and runs with the same --seed are byte-identical.

Exit codes: 0 success, 2 validation/configuration error, 3 numerical or
degeneracy error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from . import report as rep
from .dgp import (
    CopulaSpec,
    DgpSpec,
    MIXTURE_BY_NAME,
    SCEDASIS_BY_NAME,
    dgp_from_table,
    run_rejection_study,
    simulate_dgp,
)
from .estimators import (
    QuasiTailCopulaEstimate,
    estimate_integrated_scedasis,
    hill_full,
    tail_dependence_diagnostic,
)
from .exceptions import (
    ConfigurationError,
    DataValidationError,
    DegenerateDependenceError,
    DomainError,
    InsufficientExceedancesError,
    NumericalError,
    TailpairError,
)
from .pairwise import default_order, run_pairwise_analysis
from .returns import load_returns_csv
from .sample import TailConfig
from .twosample import DEFAULT_ALPHAS, HYPOTHESES, run_all_tests, run_test

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _add_tail_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, help="global rate order (default: max(k1, k2))")
    p.add_argument("--k1", type=int, help="series-1 tail order (default: 8%% of n)")
    p.add_argument("--k2", type=int, help="series-2 tail order (default: 8%% of n)")


def _add_common_flags(p: argparse.ArgumentParser, method_default="asymptotic") -> None:
    p.add_argument("--alpha", type=float, action="append",
                   help="significance level, repeatable (default: 0.05 0.1)")
    p.add_argument("--method", choices=["asymptotic", "bootstrap"], default=method_default)
    p.add_argument("--B", type=int, default=200, help="bootstrap replicates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def _alphas(args) -> tuple:
    return tuple(args.alpha) if args.alpha else DEFAULT_ALPHAS


def _dgp_from_args(args) -> DgpSpec:
    copula = CopulaSpec("T_COPULA", df=args.df, rho=args.rho)
    if args.dgp is not None:
        return dgp_from_table(args.dgp, rho=args.rho, df=args.df)
    if args.gamma1 is None or args.gamma2 is None:
        raise ConfigurationError("provide --dgp ID or --gamma1/--gamma2 (with --c1/--c2/--h)")
    return DgpSpec(
        gamma1=args.gamma1,
        gamma2=args.gamma2,
        c1=SCEDASIS_BY_NAME[args.c1],
        c2=SCEDASIS_BY_NAME[args.c2],
        h=MIXTURE_BY_NAME[args.h],
        copula=copula,
    )


def _config_for(n: int, args) -> TailConfig:
    k1 = args.k1 if args.k1 is not None else default_order(n)
    k2 = args.k2 if args.k2 is not None else default_order(n)
    k = args.k if args.k is not None else max(k1, k2)
    cfg = TailConfig(k=k, k1=k1, k2=k2)
    cfg.validate_for(n)
    return cfg


def cmd_simulate(args) -> int:
    spec = _dgp_from_args(args)
    sample = simulate_dgp(spec, args.n, args.seed)
    if args.returns_dir:
        symbols = [s.strip() for s in args.symbols.split(",")] if args.symbols else ["S1", "S2"]
        if len(symbols) != 2:
            raise ConfigurationError("--symbols needs exactly two comma-separated names")
        outdir = Path(args.returns_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        start = date.fromisoformat(args.start_date)
        dates = [(start + timedelta(days=i)).isoformat() for i in range(args.n)]
        rep.write_returns_csv(outdir / f"{symbols[0]}.csv", dates, -sample.xs)
        rep.write_returns_csv(outdir / f"{symbols[1]}.csv", dates, -sample.ys)
        print(f"wrote {outdir / (symbols[0] + '.csv')} and {outdir / (symbols[1] + '.csv')}")
    if args.out:
        rep.write_sample_csv(args.out, sample)
        print(f"wrote {args.out}")
    if not args.out and not args.returns_dir:
        raise ConfigurationError("provide --out and/or --returns-dir")
    return EXIT_OK


def cmd_estimate(args) -> int:
    sample = rep.load_sample_csv(args.sample)
    n = sample.n
    cfg = _config_for(n, args)
    g1 = hill_full(sample.xs, cfg.k1)
    g2 = hill_full(sample.ys, cfg.k2)
    sc1 = estimate_integrated_scedasis(sample.xs, cfg.k1)
    sc2 = estimate_integrated_scedasis(sample.ys, cfg.k2)
    rhat = QuasiTailCopulaEstimate(sample, cfg)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    zs = np.arange(1, n + 1) / n
    curves = {"C1": sc1(zs), "C2": sc2(zs)}
    rep.write_curves_csv(outdir / "scedasis_curves.csv", zs, curves)

    grid_pts = np.linspace(0.1, 1.0, 10)
    grid = np.array([[rhat(x, y) for y in grid_pts] for x in grid_pts])
    rep.write_grid_csv(outdir / "quasi_tail_copula_grid.csv", grid_pts, grid_pts, grid)

    payload = {
        "n": n,
        "k": cfg.k,
        "k1": cfg.k1,
        "k2": cfg.k2,
        "gamma1_hat": g1.gamma_hat,
        "gamma2_hat": g2.gamma_hat,
        "r_hat_11": rhat.value_11(),
        "tail_dependence_diagnostic": tail_dependence_diagnostic(sample, cfg),
        "tie_warnings": [sc1.tie_warning, sc2.tie_warning],
        "files": ["scedasis_curves.csv", "quasi_tail_copula_grid.csv"],
    }
    rep.atomic_write_text(outdir / "estimate.json", rep.render_json(payload))
    if not args.no_figures:
        from . import figures

        figures.save_scedasis_curves(outdir / "scedasis_curves.png", zs, curves)
    print(f"gamma1_hat={g1.gamma_hat:.6g} gamma2_hat={g2.gamma_hat:.6g} "
          f"r_hat_11={payload['r_hat_11']:.6g}; wrote {outdir}/")
    return EXIT_OK


def cmd_test(args) -> int:
    sample = rep.load_sample_csv(args.sample)
    cfg = _config_for(sample.n, args)
    alphas = _alphas(args)
    hyps = HYPOTHESES if args.hypothesis == "all" else (args.hypothesis.upper(),)
    if args.hypothesis == "all":
        results = run_all_tests(
            sample, cfg, method=args.method, B=args.B, seed=args.seed, alphas=alphas
        )
        for h, r in results.items():
            if isinstance(r, Exception):
                raise r
    else:
        results = {
            hyps[0]: run_test(
                hyps[0], sample, cfg,
                method=args.method, B=args.B, seed=args.seed, alphas=alphas,
            )
        }
    payload = {
        "n": sample.n,
        "k": cfg.k,
        "k1": cfg.k1,
        "k2": cfg.k2,
        "method": args.method,
        "seed": args.seed,
        "reports": {h: rep.test_report_dict(r) for h, r in results.items()},
    }
    text = rep.render_json(payload)
    if args.out:
        rep.atomic_write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_study(args) -> int:
    spec = _dgp_from_args(args)
    n = args.n
    cfg = _config_for(n, args)
    method = "both" if args.method == "both" else args.method
    result = run_rejection_study(
        spec, n, cfg,
        alphas=_alphas(args),
        reps=args.reps,
        method=method,
        B=args.B,
        seed=args.seed,
        hypotheses=tuple(h.upper() for h in args.hypotheses.split(",")) if args.hypotheses else HYPOTHESES,
        n_jobs=args.jobs,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rep.write_study_csv(outdir / "study.csv", result)
    rep.atomic_write_text(outdir / "study.json", rep.render_json(rep.study_result_dict(result)))
    if not args.no_figures:
        from . import figures

        figures.save_rejection_bars(outdir / "rejection_frequencies.png", result)
    for (h, a, m), f in sorted(result.rejection_frequency.items()):
        print(f"{h} {m} alpha={a:g}: {f:.4f} (± {result.half_width(h, a, m):.4f})")
    if result.failures:
        print("failures:", dict(result.failures))
    print(f"wrote {outdir}/")
    return EXIT_OK


def cmd_pairwise(args) -> int:
    directory = Path(args.returns_dir)
    if not directory.is_dir():
        raise DataValidationError(f"{directory} is not a directory")
    files = sorted(directory.glob("*.csv"))
    if len(files) < 2:
        raise DataValidationError(f"{directory} holds {len(files)} CSV files; need at least 2")
    series = [load_returns_csv(f, from_prices=args.from_prices) for f in files]
    result = run_pairwise_analysis(
        series,
        method=args.method,
        B=args.B,
        seed=args.seed,
        alphas=_alphas(args),
        k=args.k,
        k1=args.k1,
        k2=args.k2,
        min_overlap=args.min_overlap,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for h, matrix in result.p_matrices.items():
        rep.write_matrix_csv(outdir / f"pvalues_{h}.csv", result.symbols, matrix)
    rep.write_matrix_csv(outdir / "diagnostics.csv", result.symbols, result.diagnostics)
    rep.write_per_series_csv(outdir / "per_series.csv", result.per_series)
    rep.atomic_write_text(outdir / "pairwise.json", rep.render_json(rep.pairwise_report_dict(result)))
    if not args.no_figures:
        from . import figures

        alpha0 = _alphas(args)[0]
        for h, matrix in result.p_matrices.items():
            figures.save_pvalue_heatmap(
                outdir / f"pvalues_{h}.png", result.symbols, matrix,
                title=f"{h} p-values ({args.method})", alpha=alpha0,
            )
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"analyzed {len(result.symbols)} series "
          f"({len(result.symbols) * (len(result.symbols) - 1) // 2} pairs); wrote {outdir}/")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tailpair",
        description="Two-sample tail tests for paired heavy-tailed series "
        "with time-varying scale and dependence.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="draw a synthetic bivariate sample")
    ps.add_argument("--dgp", type=int, help="catalog entry 1..18")
    ps.add_argument("--gamma1", type=float)
    ps.add_argument("--gamma2", type=float)
    ps.add_argument("--c1", choices=sorted(SCEDASIS_BY_NAME), default="const")
    ps.add_argument("--c2", choices=sorted(SCEDASIS_BY_NAME), default="const")
    ps.add_argument("--h", choices=sorted(MIXTURE_BY_NAME), default="const")
    ps.add_argument("--rho", type=float, default=0.0, help="t copula correlation")
    ps.add_argument("--df", type=float, default=1.0, help="t copula degrees of freedom")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", help="paired-sample CSV (columns i,x,y)")
    ps.add_argument("--returns-dir", help="also write two return-series CSVs here")
    ps.add_argument("--symbols", help="two comma-separated names for --returns-dir")
    ps.add_argument("--start-date", default="2010-01-04", help="first synthetic date")
    ps.set_defaults(func=cmd_simulate)

    pe = sub.add_parser("estimate", help="tail estimates for a paired-sample CSV")
    pe.add_argument("sample", help="CSV with columns x,y")
    _add_tail_flags(pe)
    pe.add_argument("--out", required=True, help="output directory")
    pe.add_argument("--no-figures", action="store_true")
    pe.set_defaults(func=cmd_estimate)

    pt = sub.add_parser("test", help="run hypothesis tests on a paired-sample CSV")
    pt.add_argument("sample", help="CSV with columns x,y")
    pt.add_argument("--hypothesis", choices=["h10", "h20", "h30", "h40", "all"], default="all")
    _add_tail_flags(pt)
    _add_common_flags(pt)
    pt.add_argument("--out", help="JSON report path (default: stdout)")
    pt.set_defaults(func=cmd_test)

    pj = sub.add_parser("study", help="Monte Carlo rejection-frequency study")
    pj.add_argument("--dgp", type=int)
    pj.add_argument("--gamma1", type=float)
    pj.add_argument("--gamma2", type=float)
    pj.add_argument("--c1", choices=sorted(SCEDASIS_BY_NAME), default="const")
    pj.add_argument("--c2", choices=sorted(SCEDASIS_BY_NAME), default="const")
    pj.add_argument("--h", choices=sorted(MIXTURE_BY_NAME), default="const")
    pj.add_argument("--rho", type=float, default=0.0)
    pj.add_argument("--df", type=float, default=1.0)
    pj.add_argument("--n", type=int, required=True)
    pj.add_argument("--reps", type=int, default=200)
    pj.add_argument("--hypotheses", help="comma-separated subset, e.g. h10,h40")
    pj.add_argument("--jobs", type=int, default=1)
    _add_tail_flags(pj)
    pj.add_argument("--alpha", type=float, action="append")
    pj.add_argument("--method", choices=["asymptotic", "bootstrap", "both"], default="asymptotic")
    pj.add_argument("--B", type=int, default=200)
    pj.add_argument("--seed", type=int, default=0)
    pj.add_argument("--no-figures", action="store_true")
    pj.add_argument("--out", required=True, help="output directory")
    pj.set_defaults(func=cmd_study)

    pp = sub.add_parser("pairwise", help="all-pairs tests over a directory of return CSVs")
    pp.add_argument("returns_dir", help="directory of date,return CSVs")
    pp.add_argument("--from-prices", action="store_true", help="inputs are date,price")
    pp.add_argument("--min-overlap", type=int, default=100)
    _add_tail_flags(pp)
    _add_common_flags(pp, method_default="bootstrap")
    pp.set_defaults(B=500)
    pp.add_argument("--out", required=True, help="output directory")
    pp.set_defaults(func=cmd_pairwise)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataValidationError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DomainError, InsufficientExceedancesError, DegenerateDependenceError,
            NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except TailpairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Serialization: JSON reports (hierarchical) and CSV tables (delimited).

Floats are serialized with ``repr`` (shortest round-trip form), so parsing a
report reproduces every numeric field bit-exactly; NaN cells (matrix
diagonals, failed pairs) are encoded as JSON null. All file writes are
atomic (write temp, then rename).
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from pathlib import Path

import numpy as np

from .dgp import DgpSpec, MonteCarloResult
from .exceptions import DataValidationError
from .pairwise import PairwiseReport
from .sample import BivariateSample
from .twosample import TestReport


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def render_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def parse_json(text: str) -> dict:
    return json.loads(text)


def test_report_dict(report: TestReport) -> dict:
    return {
        "hypothesis": report.hypothesis,
        "method": report.method,
        "statistic": report.statistic,
        "p_value": report.p_value,
        "reject_at": {repr(a): bool(v) for a, v in report.reject_at.items()},
        "normalizers": dict(report.normalizers),
        "components": dict(report.components),
        "warnings": list(report.warnings),
    }


def dgp_spec_dict(spec: DgpSpec) -> dict:
    return {
        "id": spec.id,
        "gamma1": spec.gamma1,
        "gamma2": spec.gamma2,
        "c1": spec.c1.kind,
        "c2": spec.c2.kind,
        "h": spec.h.kind,
        "copula": {
            "family": spec.copula.family,
            "df": spec.copula.df,
            "rho": spec.copula.rho,
        },
    }


def study_result_dict(result: MonteCarloResult) -> dict:
    cells = []
    for h in result.hypotheses:
        for m in result.methods:
            for a in result.alphas:
                f = result.rejection_frequency[(h, a, m)]
                cells.append(
                    {
                        "hypothesis": h,
                        "method": m,
                        "alpha": a,
                        "rejection_frequency": f,
                        "half_width": result.half_width(h, a, m),
                        "successes": result.successes(h, m),
                    }
                )
    return {
        "dgp": dgp_spec_dict(result.dgp),
        "n": result.n,
        "k": result.config.k,
        "k1": result.config.k1,
        "k2": result.config.k2,
        "reps": result.reps,
        "B": result.B,
        "seed": result.seed,
        "cells": cells,
        "failures": [
            {"hypothesis": h, "method": m, "count": c}
            for (h, m), c in sorted(result.failures.items())
        ],
    }


def pairwise_report_dict(report: PairwiseReport) -> dict:
    return {
        "symbols": list(report.symbols),
        "p_matrices": {h: report.p_matrices[h] for h in report.p_matrices},
        "diagnostics": report.diagnostics,
        "per_series": list(report.per_series),
        "config": dict(report.config),
        "warnings": list(report.warnings),
    }


# ---------------------------------------------------------------------------
# CSV tables
# ---------------------------------------------------------------------------

def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_sample_csv(path, sample: BivariateSample) -> None:
    rows = [["i", "x", "y"]]
    rows += [[i + 1, repr(float(x)), repr(float(y))]
             for i, (x, y) in enumerate(zip(sample.xs, sample.ys))]
    atomic_write_text(path, _csv_text(rows))


def load_sample_csv(path) -> BivariateSample:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataValidationError(f"cannot open {path}: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = [c.strip().lower() for c in next(reader)]
    except StopIteration:
        raise DataValidationError(f"{path}: empty file") from None
    if "x" not in header or "y" not in header:
        raise DataValidationError(f"{path}: header must contain columns 'x' and 'y'")
    xi, yi = header.index("x"), header.index("y")
    xs, ys = [], []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            xs.append(float(row[xi]))
            ys.append(float(row[yi]))
        except (ValueError, IndexError) as exc:
            raise DataValidationError(f"{path}: line {line_no}: {exc}") from exc
    return BivariateSample(xs=np.asarray(xs), ys=np.asarray(ys))


def write_returns_csv(path, dates, returns) -> None:
    rows = [["date", "return"]]
    rows += [[d, repr(float(r))] for d, r in zip(dates, returns)]
    atomic_write_text(path, _csv_text(rows))


def write_matrix_csv(path, symbols, matrix) -> None:
    rows = [["symbol"] + list(symbols)]
    for sym, row in zip(symbols, np.asarray(matrix)):
        rows.append([sym] + [_cell(v) for v in row])
    atomic_write_text(path, _csv_text(rows))


def write_study_csv(path, result: MonteCarloResult) -> None:
    rows = [[
        "dgp", "n", "k", "k1", "k2", "reps", "B", "hypothesis", "method",
        "alpha", "rejection_frequency", "half_width", "successes",
    ]]
    d = study_result_dict(result)
    for cell in d["cells"]:
        rows.append([
            _cell(d["dgp"]["id"]), d["n"], d["k"], d["k1"], d["k2"], d["reps"],
            _cell(d["B"]), cell["hypothesis"], cell["method"], repr(cell["alpha"]),
            _cell(cell["rejection_frequency"]), _cell(cell["half_width"]),
            cell["successes"],
        ])
    atomic_write_text(path, _csv_text(rows))


def write_curves_csv(path, zs, curves: dict) -> None:
    names = list(curves)
    rows = [["z"] + names]
    for i, z in enumerate(zs):
        rows.append([repr(float(z))] + [_cell(curves[name][i]) for name in names])
    atomic_write_text(path, _csv_text(rows))


def write_grid_csv(path, xs, ys, grid) -> None:
    rows = [["x", "y", "value"]]
    grid = np.asarray(grid)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            rows.append([repr(float(x)), repr(float(y)), _cell(grid[i, j])])
    atomic_write_text(path, _csv_text(rows))


def write_per_series_csv(path, per_series) -> None:
    rows = [["symbol", "n", "k", "hill"]]
    for e in per_series:
        rows.append([e["symbol"], e["n"], e["k"], _cell(e["hill"])])
    atomic_write_text(path, _csv_text(rows))

"""Matplotlib renderings of the report tables: p-value heatmaps, scedasis
curves and rejection-frequency bars. PNG only, written next to the
delimited outputs."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_pvalue_heatmap(path, symbols, matrix, title: str, alpha: float = 0.05) -> None:
    m = np.asarray(matrix, dtype=float)
    fig, ax = plt.subplots(figsize=(0.6 * len(symbols) + 2.5, 0.6 * len(symbols) + 2))
    masked = np.ma.masked_invalid(m)
    im = ax.imshow(masked, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(len(symbols)), symbols, rotation=90, fontsize=8)
    ax.set_yticks(range(len(symbols)), symbols, fontsize=8)
    for i in range(len(symbols)):
        for j in range(len(symbols)):
            if i != j and np.isfinite(m[i, j]):
                ax.text(
                    j, i, f"{m[i, j]:.2f}",
                    ha="center", va="center", fontsize=6,
                    color="white" if m[i, j] < 0.5 else "black",
                )
    ax.set_title(f"{title} (reject at p < {alpha:g})")
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_scedasis_curves(path, zs, curves: dict, title: str = "Integrated scedasis") -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, values in curves.items():
        ax.step(zs, values, where="post", label=name)
    ax.plot([0, 1], [0, 1], ls="--", lw=0.8, color="gray", label="uniform")
    ax.set_xlabel("sample fraction z")
    ax.set_ylabel("integrated scedasis")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_rejection_bars(path, result, title: str | None = None) -> None:
    """Grouped bars of rejection frequency per hypothesis, one group per
    (method, alpha), with binomial error bars."""
    combos = [(m, a) for m in result.methods for a in result.alphas]
    hyps = list(result.hypotheses)
    width = 0.8 / max(1, len(combos))
    fig, ax = plt.subplots(figsize=(1.8 * len(hyps) + 2, 4))
    xs = np.arange(len(hyps))
    for ci, (m, a) in enumerate(combos):
        f = [result.rejection_frequency[(h, a, m)] for h in hyps]
        err = [result.half_width(h, a, m) for h in hyps]
        err = [0.0 if (e is None or math.isnan(e)) else e for e in err]
        ax.bar(xs + ci * width, f, width, yerr=err, capsize=2, label=f"{m}, a={a:g}")
        ax.axhline(a, ls=":", lw=0.8, color="gray")
    ax.set_xticks(xs + 0.4 - width / 2, hyps)
    ax.set_ylabel("rejection frequency")
    dgp = f"DGP {result.dgp.id}" if result.dgp.id else "custom DGP"
    ax.set_title(title or f"{dgp}, n={result.n}, reps={result.reps}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

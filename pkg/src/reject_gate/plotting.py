"""Matplotlib renderings of the demo and experiment tables.

Figures are written as SVG with a fixed hash salt and no timestamp so
reruns produce identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .evaluation import METHODS, DemoTable, ExperimentResult  # noqa: E402

_STYLE = {
    "svg.hashsalt": "reject-gate",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

_COLORS = {
    "plug_in": "tab:gray",
    "bayesian": "tab:blue",
    "epistemic": "tab:red",
    "aleatoric_oracle": "tab:green",
}

_SCORE_LABEL = {
    "fig1": "aleatoric risk v(x)",
    "fig2a": "total uncertainty T(x, D)",
    "fig2b": "epistemic uncertainty E(x, D)",
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _spans(x, mask):
    """Contiguous x-intervals where ``mask`` is true."""
    edges = np.flatnonzero(np.diff(np.concatenate(([0], mask.astype(int), [0]))))
    return [(x[a], x[b - 1]) for a, b in zip(edges[::2], edges[1::2])]


def plot_demo(table: DemoTable, path) -> None:
    with plt.rc_context(_STYLE):
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
        top.plot(table.x, table.prediction, color="k", lw=1.2, label="prediction")
        if table.train_x.size:
            top.plot(table.train_x, table.train_y, "o", ms=3, color="tab:orange", label="training data")
        bottom.plot(table.x, table.uncertainty, color="tab:purple", lw=1.2)
        bottom.axhline(table.threshold, color="k", ls="--", lw=0.8, label="threshold")
        for ax in (top, bottom):
            for lo, hi in _spans(table.x, ~table.accepted):
                ax.axvspan(lo, hi, color="0.85", lw=0)
        top.set_ylabel("y")
        top.legend(frameon=False, loc="upper left")
        bottom.set_ylabel(_SCORE_LABEL.get(table.which, "uncertainty"))
        bottom.set_xlabel("x  (shaded: reject)")
        bottom.set_yscale("log")
        bottom.legend(frameon=False, loc="upper right")
        fig.tight_layout()
        _save(fig, path)


def plot_aurec(result: ExperimentResult, path) -> None:
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for method in METHODS:
            rows = [result.row(m, method) for m in result.config.m_values]
            rows = [r for r in rows if r.trials]
            if not rows:
                continue
            m = [r.m for r in rows]
            ax.plot(m, [r.mean_aurec for r in rows], marker="o", ms=3,
                    color=_COLORS[method], label=method)
            ax.fill_between(m, [r.q40 for r in rows], [r.q60 for r in rows],
                            color=_COLORS[method], alpha=0.2, lw=0)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("training set size m")
        ax.set_ylabel("AuReC (mean, 40-60% band)")
        ax.legend(frameon=False)
        fig.tight_layout()
        _save(fig, path)

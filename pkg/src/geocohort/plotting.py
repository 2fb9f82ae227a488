"""Report figures: ROC and precision-recall curves for the confidence models
and the confidence-score histogram. PNGs are written next to the CSV data
they are drawn from."""

from __future__ import annotations

import io
from contextlib import contextmanager
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .jsonio import write_bytes  # noqa: E402

RC = {
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "svg.hashsalt": "geocohort",
}
FIGSIZE = (4.0, 3.2)


@contextmanager
def figure(figsize=FIGSIZE):
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=figsize)
        try:
            yield fig, ax
        finally:
            plt.close(fig)


def save(fig, path: str | Path) -> Path:
    """Atomic PNG write; metadata stripped so reruns are byte-identical."""
    path = Path(path)
    buf = io.BytesIO()
    fig.tight_layout()
    fig.savefig(buf, format="png", metadata={"Software": None})
    write_bytes(path, buf.getvalue())
    return path


def plot_roc(fpr, tpr, auc: float | None, path, title="ROC curve") -> Path:
    with figure() as (fig, ax):
        label = f"AUC = {auc:.3f}" if auc is not None else None
        ax.plot(fpr, tpr, color="tab:blue", lw=1.5, label=label, drawstyle="default")
        ax.plot([0, 1], [0, 1], color="0.6", lw=0.8, ls="--")
        ax.set(xlim=(0, 1), ylim=(0, 1.02), xlabel="False positive rate",
               ylabel="True positive rate", title=title)
        if label:
            ax.legend(loc="lower right", frameon=False)
        return save(fig, path)


def plot_pr(precision, recall, path, title="Precision-recall curve") -> Path:
    with figure() as (fig, ax):
        ax.plot(recall, precision, color="tab:orange", lw=1.5, drawstyle="steps-post")
        ax.set(xlim=(0, 1), ylim=(0, 1.02), xlabel="Recall", ylabel="Precision", title=title)
        return save(fig, path)


def plot_confidence_hist(scores, threshold: float, path, bins: int = 20) -> Path:
    with figure() as (fig, ax):
        ax.hist(scores, bins=bins, range=(0, 1), color="0.4", edgecolor="white", lw=0.5)
        ax.axvline(threshold, color="tab:red", lw=1.0)
        ax.set(xlim=(0, 1), xlabel="Confidence score", ylabel="Users",
               title="Distribution of confidence scores")
        return save(fig, path)

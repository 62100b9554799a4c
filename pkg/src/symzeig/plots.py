"""Convergence figures rendered to files alongside the delimited output.

All functions write a file and return its path; nothing is shown
interactively (the Agg backend is forced so the CLI works headless).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["plot_power_traces", "plot_slice_traces"]

_FIG_SIZE = (7.0, 4.4)


def plot_slice_traces(labeled_outcomes, path, title="slice QR convergence"):
    """Semilog convergence-measure curves, one per (label, slice) run.

    ``labeled_outcomes`` is an iterable of ``(label, outcomes)`` where
    ``outcomes`` are slice outcomes carrying a ``trace``; ``label`` prefixes
    the legend entry (use the permutation id for permutation families).
    """
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    for label, outcomes in labeled_outcomes:
        for outcome in outcomes:
            ks = [row.k for row in outcome.trace]
            eps = [max(row.epsilon, 1e-18) for row in outcome.trace]
            name = f"{label} slice {outcome.slice_index}" if label else \
                f"slice {outcome.slice_index}"
            ax.semilogy(ks, eps, lw=0.9, label=name)
    ax.set_xlabel("iteration")
    ax.set_ylabel("convergence measure")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    handles, labels = ax.get_legend_handles_labels()
    if len(labels) <= 12:
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_power_traces(results, path, title="power-method eigenvalue traces",
                      max_runs=40):
    """Eigenvalue-estimate trajectories of power-method restarts."""
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    for result in list(results)[:max_runs]:
        ks = [row.k for row in result.trace]
        lams = [row.lam for row in result.trace]
        color = "tab:blue" if result.converged else "tab:red"
        ax.plot(ks, lams, lw=0.7, alpha=0.6, color=color)
    ax.set_xlabel("iteration")
    ax.set_ylabel("eigenvalue estimate")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

"""Matplotlib rendering of sweep surfaces to image files."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_sweep_figure"]


def render_sweep_figure(coop_a, coop_b, fidelity, efficiency, path) -> None:
    """Two-panel heatmap of average fidelity and efficiency vs C_A, C_B."""
    coop_a = np.asarray(coop_a)
    coop_b = np.asarray(coop_b)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), constrained_layout=True)
    for ax, grid, title in (
        (axes[0], np.asarray(fidelity), "average fidelity"),
        (axes[1], np.asarray(efficiency), "average efficiency"),
    ):
        im = ax.pcolormesh(coop_b, coop_a, grid, shading="nearest", cmap="viridis")
        ax.set_xlabel(r"$C_B$")
        ax.set_ylabel(r"$C_A$")
        ax.set_title(title)
        fig.colorbar(im, ax=ax)
    fig.savefig(path, dpi=150)
    plt.close(fig)

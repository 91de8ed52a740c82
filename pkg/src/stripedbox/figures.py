"""Figure rendering for sweep trajectories and density heatmaps.

All figures are written as standalone SVG with no display dependency, and
with hash salt and date metadata pinned so repeated runs produce identical
bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from stripedbox.pt_analysis import SweepResult
from stripedbox.wavefunction import DensityGrid

plt.rcParams["svg.hashsalt"] = "stripedbox"

_SVG_METADATA = {"Date": None}

_BRANCH_COLORS = ("tab:blue", "tab:red", "tab:green", "tab:orange", "tab:purple", "tab:brown")


def save_sweep_figures(
    result: SweepResult, path_re, path_im, n_branches: int = 3
) -> None:
    """Plot Re(E) and Im(E) of the lowest branches against lambda, as two SVGs.

    Branches are the continuity-tracked trajectories, lowest first (by the
    ordering at the first sample). Detected transitions are marked with
    dotted vertical lines.
    """
    n_branches = min(n_branches, result.branches.shape[0])
    lams = result.lambdas

    for path, part, label in (
        (path_re, np.real, "Re E  (Ry)"),
        (path_im, np.imag, "Im E  (Ry)"),
    ):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for i in range(n_branches):
            ax.plot(
                lams,
                part(result.branches[i]),
                color=_BRANCH_COLORS[i % len(_BRANCH_COLORS)],
                lw=1.6,
                label=f"branch {i + 1}",
            )
        for ep in result.exceptional_points:
            ax.axvline(ep.lambda_c, color="0.45", ls=":", lw=1.0)
        ax.set_xlabel(r"$\lambda$  (Ry)")
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=9)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata=_SVG_METADATA)
        plt.close(fig)


def save_density_figure(grid: DensityGrid, path, title: str | None = None) -> None:
    """Heatmap of |psi|^2 over the box, equal aspect, as SVG."""
    fig, ax = plt.subplots(figsize=(5.6, 4.6))
    # Rasterize the mesh itself; a vector quad per grid cell would make the
    # SVG enormous at the default 201x201 sampling.
    mesh = ax.pcolormesh(
        grid.x, grid.y, grid.values.T, cmap="viridis", shading="auto", rasterized=True
    )
    ax.set_aspect("equal")
    ax.set_xlabel(r"$x$  ($a_B$)")
    ax.set_ylabel(r"$y$  ($a_B$)")
    if title:
        ax.set_title(title, fontsize=10)
    fig.colorbar(mesh, ax=ax, label=r"$|\psi|^2$  ($a_B^{-2}$)")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_METADATA, dpi=200)
    plt.close(fig)

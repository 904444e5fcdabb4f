"""Figure rendering for layouts, Pareto fronts, and alpha sweeps.

Everything draws through the Agg backend and writes straight to a file,
so the functions are safe on headless machines.
"""

from __future__ import annotations

from collections.abc import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.patches as mpatches
import matplotlib.pyplot as plt

from .model import CellKind, WarehouseConfig

KIND_COLORS = {CellKind.THREE_AXIS: "tab:blue", CellKind.TWO_AXIS: "tab:green"}


def save_layer_figure(cfg: WarehouseConfig, path: str, *, dpi: int = 150) -> str:
    """Draw each horizontal layer of the warehouse as a colored grid.

    Three-axis cells are blue, two-axis cells green, and the loading cell
    carries a white star.
    """
    nx, ny, nz = cfg.dims
    fig, axes = plt.subplots(
        1, nz, figsize=(max(2.2 * nz, 3.2), max(2.4, 0.6 * ny + 1.2)), squeeze=False
    )
    for z in range(nz):
        ax = axes[0][z]
        for y in range(ny):
            for x in range(nx):
                kind = cfg.kind_at((x, y, z))
                ax.add_patch(
                    mpatches.Rectangle(
                        (x, y), 1, 1, facecolor=KIND_COLORS[kind], edgecolor="black"
                    )
                )
                if (x, y, z) == cfg.loading:
                    ax.plot(x + 0.5, y + 0.5, marker="*", color="white", markersize=12)
        ax.set_xlim(0, nx)
        ax.set_ylim(0, ny)
        ax.set_aspect("equal")
        ax.set_xticks(range(nx + 1))
        ax.set_yticks(range(ny + 1))
        ax.set_title(f"z = {z}")
    handles = [
        mpatches.Patch(color=KIND_COLORS[CellKind.THREE_AXIS], label="three-axis"),
        mpatches.Patch(color=KIND_COLORS[CellKind.TWO_AXIS], label="two-axis"),
    ]
    fig.legend(handles=handles, loc="lower center", ncol=2, frameon=False)
    fig.suptitle(f"{nx}x{ny}x{nz}, loading at {cfg.loading}")
    fig.tight_layout(rect=(0, 0.08, 1, 1))
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path


def save_pareto_figure(
    points: Sequence[tuple[float, float]], path: str, *, dpi: int = 150
) -> str:
    """Scatter the (f_speed, f_cost) front with a step connecting line."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    if points:
        ordered = sorted(points)
        xs = [p[0] for p in ordered]
        ys = [p[1] for p in ordered]
        ax.step(xs, ys, where="post", color="tab:gray", linewidth=1)
        ax.scatter(xs, ys, color="tab:red", zorder=3)
    ax.set_xlabel("f_speed")
    ax.set_ylabel("f_cost")
    ax.set_title("Pareto front")
    ax.grid(True, linewidth=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path


def save_sweep_figure(
    alphas: Sequence[float], values: Sequence[float], path: str, *, dpi: int = 150
) -> str:
    """Plot best objective value against the speed weight alpha."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(alphas, values, marker="o", color="tab:blue")
    ax.set_xlabel("alpha")
    ax.set_ylabel("f_target")
    ax.set_title("Objective across alpha")
    ax.grid(True, linewidth=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path

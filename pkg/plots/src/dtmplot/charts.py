"""Chart builders.

Each builder takes a validated dataframe and returns a matplotlib Figure.
Rendering is deterministic: fixed Agg backend, fixed color cycle, sorted
group orders, and SVG hashsalt/date pinned in save_figure so identical
inputs produce byte-identical PNG and SVG files.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from .io import PlotInputError  # noqa: E402

COLORS = ("#1b6ca8", "#d1495b", "#66a182", "#edae49",
          "#8d5a97", "#3c3c3b", "#00798c", "#c97b4a")


def strategy_order(runs: pd.DataFrame) -> list[str]:
    """Strategies sorted by mean completion time, fastest first."""
    means = runs.groupby("strategy")["completion_time"].mean()
    return list(means.sort_values(kind="mergesort").index)


def strategy_comparison(runs: pd.DataFrame) -> plt.Figure:
    """Per-seed completion times, one line per strategy.

    Lines and legend entries are ordered fastest strategy first, so the
    legend doubles as the ranking.
    """
    order = strategy_order(runs)
    fig, ax = plt.subplots(figsize=(8, 5))
    for i, name in enumerate(order):
        grp = runs[runs["strategy"] == name].sort_values(
            "run_index", kind="mergesort")
        mean = grp["completion_time"].mean()
        ax.plot(grp["run_index"], grp["completion_time"],
                marker="o", markersize=3.5, linewidth=1.4,
                color=COLORS[i % len(COLORS)],
                label=f"{name} (mean {mean:.0f})")
        ax.axhline(mean, color=COLORS[i % len(COLORS)], linewidth=0.8,
                   linestyle=":", alpha=0.6)
    ax.set_xlabel("run index (seed-paired)")
    ax.set_ylabel("completion time [ticks]")
    ax.set_title("Strategy comparison: completion time per seeded run")
    ax.legend(title="strategy (fastest first)")
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    return fig


def compliance_sweep(sweep: pd.DataFrame) -> plt.Figure:
    """Mean travel time vs the swept parameter, with a +-1 sd band."""
    param = str(sweep["param"].iloc[0])
    grp = sweep.groupby("value")["mean_travel_time"]
    values = np.array(sorted(grp.groups))
    means = grp.mean().loc[values].to_numpy()
    stds = grp.std().fillna(0.0).loc[values].to_numpy()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.fill_between(values, means - stds, means + stds,
                    color=COLORS[0], alpha=0.18, label="+-1 sd over seeds")
    ax.plot(values, means, marker="o", color=COLORS[0], linewidth=1.6,
            label="mean over seeds")
    ax.set_xlabel(param)
    ax.set_ylabel("mean travel time [ticks]")
    ax.set_title(f"Travel time vs {param}")
    ax.legend()
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    return fig


def edge_heatmap(edges: pd.DataFrame, time_bins: int = 60) -> plt.Figure:
    """Edge occupancy over time, edges on the y axis, time binned on x.

    Counts are averaged over runs within each (edge, time-bin) cell;
    edges are shown busiest first.
    """
    df = edges.copy()
    tmax = int(df["tick"].max())
    bins = max(1, min(time_bins, tmax + 1))
    width = (tmax + 1) / bins
    df["bin"] = np.minimum((df["tick"] // width).astype(int), bins - 1)
    pivot = (df.pivot_table(index="edge_id", columns="bin", values="count",
                            aggfunc="mean", fill_value=0.0)
             .reindex(columns=range(bins), fill_value=0.0))
    busiest = pivot.mean(axis=1).sort_values(
        ascending=False, kind="mergesort")
    pivot = pivot.loc[busiest.index]

    fig, ax = plt.subplots(figsize=(9, max(3.0, 0.14 * len(pivot) + 1.5)))
    im = ax.imshow(pivot.to_numpy(), aspect="auto", cmap="magma",
                   interpolation="nearest",
                   extent=(0, tmax + 1, len(pivot), 0))
    ax.set_xlabel("tick")
    ax.set_ylabel(f"edge (busiest first, {len(pivot)} edges)")
    ax.set_yticks([])
    ax.set_title("Mean edge occupancy over time")
    fig.colorbar(im, ax=ax, label="vehicles on edge")
    fig.tight_layout()
    return fig


def save_figure(fig: plt.Figure, out: str) -> list[Path]:
    """Write the figure as both <out>.png and <out>.svg.

    `out` may carry a .png or .svg suffix, which is treated as the base
    name.  Metadata that varies between runs (SVG creation date, hashed
    ids) is pinned so identical inputs give byte-identical files.
    """
    base = Path(out)
    if base.suffix.lower() in (".png", ".svg"):
        base = base.with_suffix("")
    if base.parent and not base.parent.exists():
        base.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": "dtmplot"}):
        paths = []
        for ext, meta in (("png", {"Software": "dtmplot"}),
                          ("svg", {"Date": None})):
            path = base.with_suffix("." + ext)
            fig.savefig(path, format=ext, dpi=120, metadata=meta)
            paths.append(path)
    plt.close(fig)
    return paths


KINDS = {
    "strategy-comparison": (strategy_comparison, "load_runs"),
    "compliance-sweep": (compliance_sweep, "load_sweep"),
    "edge-heatmap": (edge_heatmap, "load_edges"),
}


def render(kind: str, paths, out: str) -> list[Path]:
    """Load inputs for `kind`, build the chart, and write PNG + SVG."""
    from . import io
    if kind not in KINDS:
        raise PlotInputError(
            f"unknown kind {kind!r}, expected one of {', '.join(KINDS)}")
    builder, loader = KINDS[kind]
    df = getattr(io, loader)(paths)
    return save_figure(builder(df), out)

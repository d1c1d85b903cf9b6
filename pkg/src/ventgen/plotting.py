"""Matplotlib figures for sweep reports."""
from __future__ import annotations

import pathlib
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .control import ControlMode  # noqa: E402
from .metrics import SimulationSummary, aggregate  # noqa: E402

STRATEGY_COLORS = {ControlMode.AC: "#4575b4", ControlMode.NV: "#91cf60", ControlMode.MM: "#fc8d59"}


def strategy_comparison(summaries: Sequence[SimulationSummary], path: pathlib.Path) -> pathlib.Path:
    """Grouped bars of mean EUI and adaptive PNT per climate and strategy."""
    rows = aggregate(summaries)
    climates = sorted({r[0] for r in rows})
    strategies = sorted({r[1] for r in rows})
    lookup = {(r[0], r[1]): r for r in rows}
    x = np.arange(len(climates))
    width = 0.8 / max(len(strategies), 1)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for k, s in enumerate(strategies):
        eui = [lookup[(c, s)][2] if (c, s) in lookup else np.nan for c in climates]
        pnt = [lookup[(c, s)][3] if (c, s) in lookup else np.nan for c in climates]
        offset = (k - (len(strategies) - 1) / 2) * width
        axes[0].bar(x + offset, eui, width, label=s.name, color=STRATEGY_COLORS[s])
        axes[1].bar(x + offset, pnt, width, label=s.name, color=STRATEGY_COLORS[s])
    for ax, ylabel in zip(axes, ("EUI (kWh/m2/yr)", "PNT, adaptive (%)")):
        ax.set_xticks(x, climates, rotation=30, ha="right")
        ax.set_ylabel(ylabel)
        ax.grid(axis="y", alpha=0.3)
    axes[1].set_ylim(0, 100)
    axes[0].legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def orientation_sweep(summaries: Sequence[SimulationSummary], path: pathlib.Path, max_lines: int = 12) -> pathlib.Path:
    """EUI against building orientation, one line per (layout, climate, strategy)."""
    series: dict[tuple, list[tuple[float, float]]] = {}
    for s in summaries:
        series.setdefault((s.layout_id, s.climate, s.strategy), []).append((s.orientation, s.eui))
    fig, ax = plt.subplots(figsize=(7, 4))
    for (lid, climate, strategy), pts in sorted(series.items(), key=lambda kv: kv[0][:2] + (int(kv[0][2]),))[
        :max_lines
    ]:
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=f"{lid} {climate} {strategy.name}")
    ax.set_xlabel("orientation (deg)")
    ax.set_ylabel("EUI (kWh/m2/yr)")
    ax.set_xticks(range(0, 360, 30))
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def eui_distribution(summaries: Sequence[SimulationSummary], path: pathlib.Path) -> pathlib.Path:
    """Histogram of EUI across cases, one panel per strategy."""
    strategies = sorted({s.strategy for s in summaries})
    fig, axes = plt.subplots(1, len(strategies), figsize=(4 * len(strategies), 3.5), squeeze=False)
    for ax, strategy in zip(axes[0], strategies):
        values = [s.eui for s in summaries if s.strategy == strategy]
        ax.hist(values, bins=min(30, max(5, len(values) // 5)), color=STRATEGY_COLORS[strategy])
        ax.set_title(strategy.name)
        ax.set_xlabel("EUI (kWh/m2/yr)")
    axes[0][0].set_ylabel("cases")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

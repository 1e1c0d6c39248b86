"""Matplotlib renderings written to files next to the delimited outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .equilibrium import PriceSchedule, SweepPoint
from .market import MarketInstance
from .mechanism import SettlementRecord
from .planner import PlannerSolution, recourse_dual

__all__ = ["render_clearing_figure", "render_sweep_figure", "render_simulation_figure"]


def render_clearing_figure(sol: PlannerSolution, prices: PriceSchedule,
                           inst: MarketInstance, path) -> None:
    """Real-time price schedule and the recourse dual over the support."""
    w = np.linspace(0.0, inst.dist.w_max, 400)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(w, prices.p2(w), label="p2(w)")
    ax.plot(w, recourse_dual(sol, w, inst), "--", label="recourse dual")
    ax.axhline(prices.p1, color="gray", lw=0.8, label="p1")
    for v, name in ((sol.theta_star, "theta*"), (sol.y_star, "y*")):
        if 0.0 < v < inst.dist.w_max:
            ax.axvline(v, color="k", lw=0.6, ls=":")
            ax.annotate(name, (v, ax.get_ylim()[1] * 0.92), ha="center", fontsize=8)
    ax.set_xlabel("realized renewable output w")
    ax.set_ylabel("price")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(points: list[SweepPoint], path) -> None:
    eps = [p.epsilon for p in points]
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    axes[0].plot(eps, [p.y_star for p in points])
    axes[0].set_ylabel("scheduled renewables y*")
    axes[1].plot(eps, [p.p1 for p in points])
    axes[1].set_ylabel("forward price p1")
    axes[1].set_xlabel("risk weight epsilon")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_simulation_figure(records: list[SettlementRecord], path) -> None:
    ws = [r.realized_w for r in records]
    outlays = [r.iso_outlay for r in records]
    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.2))
    axes[0].hist(ws, bins=40, color="tab:blue", alpha=0.8)
    axes[0].set_xlabel("realized output w")
    axes[0].set_ylabel("runs")
    axes[1].hist(outlays, bins=40, color="tab:orange", alpha=0.8)
    axes[1].set_xlabel("operator outlay per run")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Brute-force reference computations, deliberately redundant with the
analytic modules.

Everything here is built only from the output distribution and the sample
CVaR, never from the planner, price, or mechanism code it is used to check:
the grid search re-derives the reduced objective inline from partial power
moments, the Monte Carlo estimator works on raw loss draws, and the
sample-average solver optimizes an empirical objective by golden-section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .market import MarketInstance
from .risk import cvar_samples

__all__ = [
    "OracleReport",
    "grid_search_y",
    "mc_cvar_recourse",
    "saa_single_stage",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OracleReport:
    """One analytic-vs-oracle comparison with its gaps and provenance."""

    name: str
    analytic: float
    oracle: float
    abs_gap: float
    rel_gap: float
    size: int
    seed: int | None

    @classmethod
    def build(cls, name: str, analytic: float, oracle: float,
              size: int, seed: int | None = None) -> "OracleReport":
        if not (math.isfinite(analytic) and math.isfinite(oracle)):
            raise ValueError("both values must be finite")
        gap = abs(analytic - oracle)
        rel = gap / abs(analytic) if analytic != 0.0 else (0.0 if gap == 0.0 else math.inf)
        return cls(name=name, analytic=analytic, oracle=oracle,
                   abs_gap=gap, rel_gap=rel, size=size, seed=seed)


def _objective_on_grid(ys: np.ndarray, inst: MarketInstance) -> np.ndarray:
    """Reduced clearing objective evaluated directly from partial moments."""
    a = inst.agg_a
    at = inst.agg_a_tilde
    alpha = inst.risk.alpha
    eps = inst.risk.epsilon
    d = inst.dist
    q = d.quantile(1.0 - alpha)
    theta_mean = np.minimum(ys, d.w_max)
    theta_tail = np.minimum(ys, q)
    mean_term = at * d.partial_power_integral(ys, theta_mean, 2)
    tail_term = at / (1.0 - alpha) * d.partial_power_integral(ys, theta_tail, 2)
    return a * (inst.demand - ys) ** 2 + (1.0 - eps) * mean_term + eps * tail_term


def grid_search_y(inst: MarketInstance, step: float) -> float:
    """Argmin of the reduced objective over {0, step, ..., D}, refined once
    at step/100 around the incumbent."""
    if not step > 0.0:
        raise ValueError("step must be > 0")
    d = inst.demand
    if d == 0.0:
        return 0.0
    ys = np.arange(int(math.floor(d / step + 1e-9)) + 1) * step
    if ys[-1] < d:
        ys = np.append(ys, d)
    incumbent = float(ys[np.argmin(_objective_on_grid(ys, inst))])
    lo = max(0.0, incumbent - step)
    hi = min(d, incumbent + step)
    fine = lo + np.arange(int(round((hi - lo) / (step / 100.0))) + 1) * (step / 100.0)
    fine = np.clip(fine, 0.0, d)
    return float(fine[np.argmin(_objective_on_grid(fine, inst))])


def mc_cvar_recourse(y: float, inst: MarketInstance, n: int,
                     rng: np.random.Generator) -> float:
    """Sample CVaR of the recourse cost from n fresh output draws."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if y <= 0.0:
        return 0.0
    w = inst.dist.sample(rng, n)
    losses = inst.agg_a_tilde * np.clip(y - w, 0.0, None) ** 2
    return cvar_samples(losses, inst.risk.alpha)


def saa_single_stage(inst: MarketInstance, n_scenarios: int,
                     rng: np.random.Generator) -> tuple[float, float]:
    """Minimize the sample-average single-stage objective over y.

    The per-scenario recourse term uses the closed-form inner dispatch cost,
    so each scenario contributes ``agg_a_tilde * max(y - w_s, 0)^2``.  The
    sampled objective is convex in y but only piecewise smooth through the
    CVaR term, so the search is golden-section rather than derivative-based.
    Returns (y, objective value).
    """
    if n_scenarios < 1:
        raise ValueError("n_scenarios must be >= 1")
    ws = inst.dist.sample(rng, n_scenarios)
    a = inst.agg_a
    at = inst.agg_a_tilde
    alpha = inst.risk.alpha
    eps = inst.risk.epsilon

    def sampled_objective(y: float) -> float:
        losses = at * np.clip(y - ws, 0.0, None) ** 2
        risk_term = eps * cvar_samples(losses, alpha) if eps > 0.0 else 0.0
        return (a * (inst.demand - y) ** 2
                + (1.0 - eps) * float(np.mean(losses)) + risk_term)

    lo, hi = 0.0, inst.demand
    if hi == 0.0:
        return 0.0, sampled_objective(0.0)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = sampled_objective(x1), sampled_objective(x2)
    while hi - lo > 1e-6:
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = sampled_objective(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = sampled_objective(x2)
    y = 0.5 * (lo + hi)
    return y, sampled_objective(y)

"""Stage-wise equilibrium prices and their verification.

The forward price equals the planner's balance dual; the real-time price is
the recourse dual divided by the risk weight, which collapses to the analytic
form ``2 * agg_a_tilde * max(y_star - w, 0)`` for every blend weight.  The
schedule is carried as (slope, intercept) so it is exact on the whole support
and trivially serializable; the dual-over-weight piecewise form is retained
as a diagnostic and checked against the analytic form at construction.  At
epsilon = 1 the middle branch of the quotient degenerates to 0/0, so only the
analytic form applies there.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .market import GeneratorParams, MarketInstance, RiskParams
from .planner import PlannerSolution, default_w_grid, solve_planner
from .risk import risk_weight

__all__ = [
    "PriceSchedule",
    "EquilibriumReport",
    "SweepPoint",
    "equilibrium_prices",
    "gen_stage1_best_response",
    "gen_stage2_best_response",
    "verify_equilibrium",
    "epsilon_sweep",
]


@dataclass(frozen=True)
class PriceSchedule:
    """Forward price p1 and the real-time price line
    ``p2(w) = p2_slope * max(p2_intercept - w, 0)``."""

    p1: float
    p2_slope: float
    p2_intercept: float
    theta_star: float
    risk: RiskParams

    def __post_init__(self):
        if self.p1 < 0.0 or self.p2_slope < 0.0:
            raise ValueError("prices must be nonnegative")

    def p2(self, w):
        arr = np.asarray(w, dtype=float)
        out = self.p2_slope * np.clip(self.p2_intercept - arr, 0.0, None)
        return float(out[()]) if arr.ndim == 0 else out

    def p2_piecewise(self, w):
        """Diagnostic dual-over-weight form of the real-time price.

        Undefined between theta_star and the intercept when epsilon = 1
        (the weight vanishes there), hence restricted to epsilon < 1.
        """
        if self.risk.epsilon >= 1.0:
            raise ValueError("piecewise form undefined at epsilon = 1")
        arr = np.asarray(w, dtype=float)
        weight = risk_weight(arr, self.theta_star, self.p2_intercept, self.risk)
        dual = weight * self.p2_slope * np.clip(self.p2_intercept - arr, 0.0, None)
        out = np.where(arr >= self.p2_intercept, 0.0,
                       dual / np.where(weight > 0.0, weight, 1.0))
        return float(out[()]) if arr.ndim == 0 else out


def equilibrium_prices(sol: PlannerSolution, inst: MarketInstance) -> PriceSchedule:
    """Build the supporting prices from an optimal planner solution."""
    prices = PriceSchedule(
        p1=sol.lambda_star,
        p2_slope=2.0 * inst.agg_a_tilde,
        p2_intercept=sol.y_star,
        theta_star=sol.theta_star,
        risk=inst.risk,
    )
    if inst.risk.epsilon < 1.0:
        grid = default_w_grid(inst, sol)
        gap = float(np.max(np.abs(prices.p2(grid) - prices.p2_piecewise(grid))))
        if gap > 1e-10:
            raise RuntimeError(f"price forms disagree by {gap}")
    return prices


def gen_stage1_best_response(p1: float, gen: GeneratorParams) -> float:
    """Unique maximizer of p1*x - a*x^2 over x >= 0."""
    if p1 < 0.0:
        raise ValueError("p1 must be >= 0")
    return p1 / (2.0 * gen.a)


def gen_stage2_best_response(p2_at_w: float, gen: GeneratorParams) -> float:
    """Unique maximizer of p2*z - a_tilde*z^2 over z >= 0."""
    if p2_at_w < 0.0:
        raise ValueError("p2 must be >= 0")
    return p2_at_w / (2.0 * gen.a_tilde)


@dataclass(frozen=True)
class EquilibriumReport:
    """Gaps between price-taking best responses and the planner allocation,
    plus the market-clearing checks."""

    max_stage1_gap: float
    max_stage2_gap: float
    clearing_gap: float
    stage2_clearing_gap: float
    recourse_feasible: bool


def verify_equilibrium(sol: PlannerSolution, prices: PriceSchedule,
                       inst: MarketInstance,
                       w_grid: np.ndarray | None = None) -> EquilibriumReport:
    if w_grid is None:
        w_grid = default_w_grid(inst, sol)
    w = np.asarray(w_grid, dtype=float)

    x_br = prices.p1 / (2.0 * inst.a_coeffs)
    stage1_gap = float(np.max(np.abs(x_br - sol.x_star)))

    p2w = prices.p2(w)
    z_br = p2w[None, :] / (2.0 * inst.a_tilde_coeffs[:, None])
    shortfall = np.clip(sol.y_star - w, 0.0, None)
    z_plan = inst.agg_a_tilde * shortfall[None, :] / inst.a_tilde_coeffs[:, None]
    stage2_gap = float(np.max(np.abs(z_br - z_plan)))

    clearing = abs(float(np.sum(sol.x_star)) + sol.y_star - inst.demand)
    supply = np.sum(z_br, axis=0)
    stage2_clearing = float(np.max(np.abs(supply - shortfall)))
    feasible = bool(np.all(supply - (sol.y_star - w) >= -1e-9))

    return EquilibriumReport(
        max_stage1_gap=stage1_gap,
        max_stage2_gap=stage2_gap,
        clearing_gap=clearing,
        stage2_clearing_gap=stage2_clearing,
        recourse_feasible=feasible,
    )


@dataclass(frozen=True)
class SweepPoint:
    epsilon: float
    y_star: float
    p1: float
    p2_slope: float
    p2_intercept: float


def epsilon_sweep(inst: MarketInstance, eps_grid) -> list[SweepPoint]:
    """Re-solve and re-price the instance along a grid of blend weights."""
    points = []
    for eps in np.asarray(eps_grid, dtype=float):
        inst_eps = replace(inst, risk=replace(inst.risk, epsilon=float(eps)))
        sol = solve_planner(inst_eps)
        prices = equilibrium_prices(sol, inst_eps)
        points.append(SweepPoint(
            epsilon=float(eps),
            y_star=sol.y_star,
            p1=prices.p1,
            p2_slope=prices.p2_slope,
            p2_intercept=prices.p2_intercept,
        ))
    return points

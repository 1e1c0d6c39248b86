"""Central clearing: solve the planner's two-stage problem and verify the
optimality system.

The second stage has a closed form: the shortfall ``max(y - w, 0)`` splits
across generators in inverse proportion to their real-time coefficients, so
the whole problem reduces to one convex scalar objective in the scheduled
renewable quantity y.  The reduction is exact because the first-order
conditions force the proportional split of D - y across forward plants as
well.  ``solve_planner`` bisects the reduced gradient; ``kkt_residuals``
checks the full stationarity / complementarity / feasibility system
numerically, including the link between the forward-balance dual and the
integrated recourse dual.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from scipy.integrate import quad

from .market import MarketInstance
from .risk import planner_risk, planner_risk_derivative, risk_weight

__all__ = [
    "PlannerSolution",
    "KktReport",
    "second_stage_dispatch",
    "recourse_cost",
    "first_stage_split",
    "reduced_objective",
    "reduced_gradient",
    "solve_planner",
    "solution_from_y",
    "recourse_dual",
    "default_w_grid",
    "kkt_residuals",
]

_BISECT_WIDTH = 1e-10


@dataclass(frozen=True, eq=False)
class PlannerSolution:
    """Optimal schedule: renewables y_star, forward dispatch x_star, the
    forward-balance dual lambda_star, the tail/quantile split point
    theta_star, and the objective value."""

    y_star: float
    x_star: np.ndarray
    lambda_star: float
    theta_star: float
    objective: float


def second_stage_dispatch(y: float, w: float, inst: MarketInstance):
    """Cost-minimal real-time dispatch covering the shortfall, and the dual
    of the recourse constraint in the risk-neutral problem."""
    shortfall = max(y - w, 0.0)
    agg = inst.agg_a_tilde
    z = agg * shortfall / inst.a_tilde_coeffs
    mu = 2.0 * agg * shortfall
    return z, mu


def recourse_cost(y: float, w: float, inst: MarketInstance) -> float:
    """Aggregate real-time cost at the optimal dispatch."""
    shortfall = max(y - w, 0.0)
    return inst.agg_a_tilde * shortfall * shortfall


def first_stage_split(y: float, inst: MarketInstance) -> np.ndarray:
    """Split the residual demand D - y across forward plants in inverse
    proportion to their cost coefficients."""
    if not 0.0 <= y <= inst.demand:
        raise ValueError(f"y must lie in [0, demand], got {y}")
    return inst.agg_a * (inst.demand - y) / inst.a_coeffs


def reduced_objective(y: float, inst: MarketInstance) -> float:
    """Total cost as a function of the scheduled renewables alone."""
    resid = inst.demand - y
    return inst.agg_a * resid * resid + planner_risk(y, inst)


def reduced_gradient(y: float, inst: MarketInstance) -> float:
    return -2.0 * inst.agg_a * (inst.demand - y) + planner_risk_derivative(y, inst)


def solution_from_y(inst: MarketInstance, y: float) -> PlannerSolution:
    """Assemble the full solution record implied by a renewable schedule y."""
    x = first_stage_split(y, inst)
    lam = 2.0 * inst.agg_a * (inst.demand - y)
    theta = min(inst.dist.quantile(1.0 - inst.risk.alpha), y)
    obj = reduced_objective(y, inst)
    assert abs(float(np.sum(x)) + y - inst.demand) <= 1e-12 * max(1.0, inst.demand)
    return PlannerSolution(y_star=y, x_star=x, lambda_star=lam,
                           theta_star=theta, objective=obj)


def solve_planner(inst: MarketInstance) -> PlannerSolution:
    """Minimize the reduced objective on [0, demand].

    The objective is strictly convex, so the gradient has at most one root;
    bisection narrows it to a 1e-10 bracket.  The gradient at 0 is -2*a*D,
    hence strictly negative whenever D > 0; the upper boundary is returned
    if the gradient never turns positive.
    """
    d = inst.demand
    if d == 0.0:
        return solution_from_y(inst, 0.0)
    if reduced_gradient(d, inst) <= 0.0:
        return solution_from_y(inst, d)
    lo, hi = 0.0, d
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if reduced_gradient(mid, inst) < 0.0:
            lo = mid
        else:
            hi = mid
    return solution_from_y(inst, 0.5 * (lo + hi))


def recourse_dual(sol: PlannerSolution, w, inst: MarketInstance):
    """Dual of the recourse constraint in the risk-weighted problem:
    the risk weight times twice the aggregate marginal shortfall cost."""
    arr = np.asarray(w, dtype=float)
    shortfall = np.clip(sol.y_star - arr, 0.0, None)
    out = risk_weight(arr, sol.theta_star, sol.y_star, inst.risk) \
        * 2.0 * inst.agg_a_tilde * shortfall
    return float(out[()]) if arr.ndim == 0 else out


def default_w_grid(inst: MarketInstance, sol: PlannerSolution | None = None,
                   n: int = 1001) -> np.ndarray:
    """Equispaced output grid plus the dispatch breakpoints when interior."""
    grid = np.linspace(0.0, inst.dist.w_max, n)
    if sol is not None:
        extra = [v for v in (sol.theta_star, sol.y_star) if 0.0 < v < inst.dist.w_max]
        if extra:
            grid = np.unique(np.concatenate([grid, np.array(extra)]))
    return grid


@dataclass(frozen=True)
class KktReport:
    """Worst-case violations of the optimality system over the generators
    and a grid of realized outputs."""

    stage1_stationarity: float
    stage1_complementarity: float
    renewable_stationarity: float
    renewable_complementarity: float
    stage2_stationarity: float
    stage2_complementarity: float
    recourse_complementarity: float
    dual_nonnegativity: float
    balance_gap: float
    recourse_feasibility: float
    nonnegativity: float

    @property
    def max_residual(self) -> float:
        return max(getattr(self, f.name) for f in fields(self))

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _integrated_recourse_dual(sol: PlannerSolution, inst: MarketInstance) -> float:
    """Quadrature of recourse_dual(w) * pdf(w), split at the weight kinks."""
    upper = min(sol.y_star, inst.dist.w_max)
    if upper <= 0.0:
        return 0.0
    cuts = sorted({0.0, min(sol.theta_star, upper), upper})
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0.0:
            continue
        val, _ = quad(lambda w: recourse_dual(sol, w, inst) * inst.dist.pdf(w),
                      a, b, epsabs=1e-10, epsrel=1e-10, limit=200)
        total += val
    return total


def kkt_residuals(sol: PlannerSolution, inst: MarketInstance,
                  w_grid: np.ndarray | None = None) -> KktReport:
    if w_grid is None:
        w_grid = default_w_grid(inst, sol)
    y = sol.y_star
    x = sol.x_star
    lam = sol.lambda_star
    a = inst.a_coeffs
    at = inst.a_tilde_coeffs

    s1 = 2.0 * a * x - lam
    stage1_stat = float(np.max(np.maximum(0.0, -s1)))
    stage1_comp = float(np.max(np.abs(x * s1)))

    integral = _integrated_recourse_dual(sol, inst)
    renew_stat = max(0.0, lam - integral)
    renew_comp = abs(y * (integral - lam))

    w = np.asarray(w_grid, dtype=float)
    shortfall = np.clip(y - w, 0.0, None)
    z = inst.agg_a_tilde * shortfall[None, :] / at[:, None]
    cw = risk_weight(w, sol.theta_star, y, inst.risk)
    mu = cw * 2.0 * inst.agg_a_tilde * shortfall
    s2 = 2.0 * at[:, None] * cw[None, :] * z - mu[None, :]
    stage2_stat = float(np.max(np.maximum(0.0, -s2)))
    stage2_comp = float(np.max(np.abs(z * s2)))
    slack = y - w - np.sum(z, axis=0)
    recourse_comp = float(np.max(np.abs(mu * slack)))
    dual_nonneg = float(np.max(np.maximum(0.0, -mu)))

    balance = abs(float(np.sum(x)) + y - inst.demand)
    recourse_feas = float(np.max(np.maximum(0.0, slack)))
    nonneg = max(0.0, -float(np.min(x)), -y, -float(np.min(z)))

    return KktReport(
        stage1_stationarity=stage1_stat,
        stage1_complementarity=stage1_comp,
        renewable_stationarity=renew_stat,
        renewable_complementarity=renew_comp,
        stage2_stationarity=stage2_stat,
        stage2_complementarity=stage2_comp,
        recourse_complementarity=recourse_comp,
        dual_nonnegativity=dual_nonneg,
        balance_gap=balance,
        recourse_feasibility=recourse_feas,
        nonnegativity=nonneg,
    )

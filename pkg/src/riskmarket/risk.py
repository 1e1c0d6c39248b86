"""Risk measures for the market: sample-based VaR/CVaR plus the closed forms
specialized to the quadratic recourse cost.

The recourse cost of scheduling y units of renewables and realizing output w
is ``agg_a_tilde * max(y - w, 0)^2``.  Its VaR has a two-case closed form, its
CVaR reduces to a partial power moment of the output distribution with upper
limit ``theta = min(quantile(1 - alpha), y)``, and the CVaR is continuously
differentiable in y even across the theta kink.  The planner blends
expectation and CVaR with weight epsilon.
"""

from __future__ import annotations

import math

import numpy as np

from .market import MarketInstance, RiskParams

__all__ = [
    "var_samples",
    "cvar_samples",
    "risk_weight",
    "var_recourse",
    "cvar_recourse",
    "cvar_recourse_derivative",
    "planner_risk",
    "planner_risk_derivative",
]


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha in (0,1), got {alpha}")


def var_samples(losses, alpha: float) -> float:
    """Smallest sample value whose empirical cdf reaches alpha: the
    ceil(alpha*n)-th order statistic."""
    ls = np.sort(np.asarray(losses, dtype=float).ravel())
    if ls.size == 0:
        raise ValueError("losses must be nonempty")
    _check_alpha(alpha)
    # nudge guards against alpha*n landing an ulp above an exact integer
    rank = math.ceil(alpha * ls.size - 1e-12)
    rank = min(max(rank, 1), ls.size)
    return float(ls[rank - 1])


def cvar_samples(losses, alpha: float) -> float:
    """CVaR of the empirical loss distribution.

    Minimizes zeta + E[(L - zeta)_+] / (1 - alpha) over zeta.  The objective
    is piecewise linear with kinks only at sample values, so evaluating it at
    every sample and taking the minimum is exact.
    """
    ls = np.sort(np.asarray(losses, dtype=float).ravel())
    if ls.size == 0:
        raise ValueError("losses must be nonempty")
    _check_alpha(alpha)
    n = ls.size
    tail_sum = np.cumsum(ls[::-1])[::-1]      # tail_sum[i] = sum of ls[i:]
    tail_len = n - np.arange(n)
    excess = tail_sum - tail_len * ls         # sum over j of (ls[j] - ls[i])_+
    phi = ls + excess / ((1.0 - alpha) * n)
    return float(np.min(phi))


def risk_weight(w, theta_star: float, y_star: float, risk: RiskParams):
    """Piecewise weight the planner's risk attitude puts on the recourse
    constraint dual: full tail weight below theta_star, the residual
    expectation weight up to y_star, zero beyond."""
    arr = np.asarray(w, dtype=float)
    hi = 1.0 - risk.epsilon + risk.epsilon / (1.0 - risk.alpha)
    lo = 1.0 - risk.epsilon
    out = np.where(arr >= y_star, 0.0, np.where(arr <= theta_star, hi, lo))
    return float(out[()]) if arr.ndim == 0 else out


def var_recourse(y: float, inst: MarketInstance) -> float:
    """VaR_alpha of the recourse cost: zero while the scheduled quantity is
    below the (1 - alpha) output quantile, quadratic above it."""
    q = inst.dist.quantile(1.0 - inst.risk.alpha)
    if y < q:
        return 0.0
    return inst.agg_a_tilde * (y - q) ** 2


def cvar_recourse(y: float, inst: MarketInstance) -> float:
    """CVaR_alpha of the recourse cost via the partial-moment closed form."""
    alpha = inst.risk.alpha
    q = inst.dist.quantile(1.0 - alpha)
    theta = min(q, y)
    if theta <= 0.0:
        return 0.0
    moment = inst.dist.partial_power_integral(y, theta, 2)
    return inst.agg_a_tilde / (1.0 - alpha) * moment


def cvar_recourse_derivative(y: float, inst: MarketInstance) -> float:
    """d/dy of ``cvar_recourse``; continuous across y = quantile(1 - alpha)."""
    alpha = inst.risk.alpha
    q = inst.dist.quantile(1.0 - alpha)
    theta = min(q, y)
    if theta <= 0.0:
        return 0.0
    moment = inst.dist.partial_power_integral(y, theta, 1)
    return 2.0 * inst.agg_a_tilde / (1.0 - alpha) * moment


def planner_risk(y: float, inst: MarketInstance) -> float:
    """(1 - epsilon) * E[recourse cost] + epsilon * CVaR_alpha of it."""
    eps = inst.risk.epsilon
    theta = min(y, inst.dist.w_max)
    mean_term = 0.0
    if theta > 0.0:
        mean_term = inst.agg_a_tilde * inst.dist.partial_power_integral(y, theta, 2)
    return (1.0 - eps) * mean_term + eps * cvar_recourse(y, inst)


def planner_risk_derivative(y: float, inst: MarketInstance) -> float:
    eps = inst.risk.epsilon
    theta = min(y, inst.dist.w_max)
    mean_term = 0.0
    if theta > 0.0:
        mean_term = 2.0 * inst.agg_a_tilde * inst.dist.partial_power_integral(y, theta, 1)
    return (1.0 - eps) * mean_term + eps * cvar_recourse_derivative(y, inst)

"""Five-step settlement mechanism: bid intake, clearing, price announcement,
output realization, settlement.

Generators submit their cost coefficient pairs; the operator clears the
market, announces both stage prices, and settles each generator at its
price-taking best response.  Real-time energy is compensated at p2(w) —
revenue enters the generator's profit with a positive sign — and renewable
output beyond the scheduled quantity is spilled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import RenewableDistribution
from .equilibrium import PriceSchedule, equilibrium_prices
from .market import GeneratorParams, MarketInstance, RiskParams
from .planner import PlannerSolution, solve_planner
from .risk import cvar_samples

__all__ = [
    "BidRejectedError",
    "SettlementRecord",
    "SimulationSummary",
    "run_mechanism",
    "simulate_runs",
    "generator_realized_profit",
]


class BidRejectedError(ValueError):
    """Submitted bids violate a market-instance invariant."""


def _instance_from_bids(bids, demand: float, risk: RiskParams,
                        dist: RenewableDistribution) -> MarketInstance:
    try:
        gens = tuple(b if isinstance(b, GeneratorParams) else GeneratorParams(*b)
                     for b in bids)
        return MarketInstance(generators=gens, demand=demand, risk=risk, dist=dist)
    except ValueError as exc:
        raise BidRejectedError(str(exc)) from exc


@dataclass(frozen=True, eq=False)
class SettlementRecord:
    """Quantities and cash flows of one mechanism run at realized output w."""

    realized_w: float
    y_star: float
    p1: float
    p2_at_w: float
    a: np.ndarray
    a_tilde: np.ndarray
    stage1_qty: np.ndarray
    stage2_qty: np.ndarray
    stage1_payment: np.ndarray
    stage2_payment: np.ndarray
    production: np.ndarray
    profit: np.ndarray
    iso_outlay: float


def _settle(inst: MarketInstance, sol: PlannerSolution,
            prices: PriceSchedule, w: float) -> SettlementRecord:
    a = inst.a_coeffs
    at = inst.a_tilde_coeffs
    x = prices.p1 / (2.0 * a)
    p2 = prices.p2(w)
    z = p2 / (2.0 * at)
    pay1 = prices.p1 * x
    pay2 = p2 * z
    profit = pay1 - a * x * x + pay2 - at * z * z
    return SettlementRecord(
        realized_w=float(w),
        y_star=sol.y_star,
        p1=prices.p1,
        p2_at_w=float(p2),
        a=a,
        a_tilde=at,
        stage1_qty=x,
        stage2_qty=z,
        stage1_payment=pay1,
        stage2_payment=pay2,
        production=x + z,
        profit=profit,
        iso_outlay=float(np.sum(pay1) + np.sum(pay2)),
    )


def run_mechanism(bids, demand: float, risk: RiskParams,
                  dist: RenewableDistribution, realized_w: float) -> SettlementRecord:
    """Execute the full mechanism for one realized renewable output."""
    inst = _instance_from_bids(bids, demand, risk, dist)
    if not 0.0 <= realized_w <= dist.w_max:
        raise ValueError(f"realized_w outside [0, {dist.w_max}]")
    sol = solve_planner(inst)
    prices = equilibrium_prices(sol, inst)
    return _settle(inst, sol, prices, realized_w)


def generator_realized_profit(record: SettlementRecord, i: int) -> float:
    """Profit of generator i at the settled quantities: revenue in both
    stages minus the quadratic production costs."""
    x = record.stage1_qty[i]
    z = record.stage2_qty[i]
    return float(record.p1 * x - record.a[i] * x * x
                 + record.p2_at_w * z - record.a_tilde[i] * z * z)


@dataclass(frozen=True, eq=False)
class SimulationSummary:
    runs: int
    mean_iso_outlay: float
    cvar_iso_outlay: float
    mean_stage2_outlay: float
    mean_profit: np.ndarray


def simulate_runs(bids, demand: float, risk: RiskParams,
                  dist: RenewableDistribution, n: int,
                  rng: np.random.Generator):
    """Clear once, then settle n independent output draws.

    Deterministic given the generator seed; the outlay CVaR in the summary
    uses the instance's own tail level.
    """
    inst = _instance_from_bids(bids, demand, risk, dist)
    if n < 1:
        raise ValueError("n must be >= 1")
    sol = solve_planner(inst)
    prices = equilibrium_prices(sol, inst)
    draws = dist.sample(rng, n)
    records = [_settle(inst, sol, prices, w) for w in draws]
    outlays = np.array([r.iso_outlay for r in records])
    stage2 = np.array([float(np.sum(r.stage2_payment)) for r in records])
    profits = np.stack([r.profit for r in records])
    summary = SimulationSummary(
        runs=n,
        mean_iso_outlay=float(np.mean(outlays)),
        cvar_iso_outlay=cvar_samples(outlays, risk.alpha),
        mean_stage2_outlay=float(np.mean(stage2)),
        mean_profit=np.mean(profits, axis=0),
    )
    return records, summary

"""Risk-aware two-stage electricity market clearing with renewable generation.

Library layout:

- ``distributions``: renewable-output models (pdf/cdf/quantile, sampling,
  partial power moments).
- ``market``: instance data (generator coefficients, demand, risk weights).
- ``risk``: sample VaR/CVaR and the recourse-cost closed forms.
- ``planner``: central clearing solve and optimality-system verification.
- ``equilibrium``: stage prices, best responses, equilibrium checks, sweeps.
- ``mechanism``: five-step settlement simulation.
- ``oracles``: brute-force reference computations used by tests and the CLI.
- ``scenario`` / ``cli`` / ``figures``: file ingestion, commands, reports.
"""

from .distributions import (PiecewiseLinearRenewable, RenewableDistribution,
                            TruncatedNormalRenewable, UniformRenewable)
from .equilibrium import (EquilibriumReport, PriceSchedule, SweepPoint,
                          epsilon_sweep, equilibrium_prices,
                          gen_stage1_best_response, gen_stage2_best_response,
                          verify_equilibrium)
from .market import GeneratorParams, MarketInstance, RiskParams
from .mechanism import (BidRejectedError, SettlementRecord, SimulationSummary,
                        generator_realized_profit, run_mechanism, simulate_runs)
from .oracles import OracleReport, grid_search_y, mc_cvar_recourse, saa_single_stage
from .planner import (KktReport, PlannerSolution, default_w_grid,
                      first_stage_split, kkt_residuals, recourse_cost,
                      recourse_dual, reduced_gradient, reduced_objective,
                      second_stage_dispatch, solution_from_y, solve_planner)
from .risk import (cvar_recourse, cvar_recourse_derivative, cvar_samples,
                   planner_risk, planner_risk_derivative, risk_weight,
                   var_recourse, var_samples)
from .scenario import ScenarioConfig, ScenarioError, load_scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "RenewableDistribution", "UniformRenewable", "TruncatedNormalRenewable",
    "PiecewiseLinearRenewable",
    "GeneratorParams", "MarketInstance", "RiskParams",
    "var_samples", "cvar_samples", "risk_weight",
    "var_recourse", "cvar_recourse", "cvar_recourse_derivative",
    "planner_risk", "planner_risk_derivative",
    "PlannerSolution", "KktReport", "second_stage_dispatch", "recourse_cost",
    "first_stage_split", "reduced_objective", "reduced_gradient",
    "solve_planner", "solution_from_y", "recourse_dual", "default_w_grid",
    "kkt_residuals",
    "PriceSchedule", "EquilibriumReport", "SweepPoint", "equilibrium_prices",
    "gen_stage1_best_response", "gen_stage2_best_response",
    "verify_equilibrium", "epsilon_sweep",
    "BidRejectedError", "SettlementRecord", "SimulationSummary",
    "run_mechanism", "simulate_runs", "generator_realized_profit",
    "OracleReport", "grid_search_y", "mc_cvar_recourse", "saa_single_stage",
    "ScenarioConfig", "ScenarioError", "parse_scenario", "load_scenario",
]

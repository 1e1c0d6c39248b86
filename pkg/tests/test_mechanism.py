import numpy as np
import pytest
from numpy.testing import assert_allclose

from riskmarket import (BidRejectedError, RiskParams, UniformRenewable,
                        generator_realized_profit, run_mechanism,
                        second_stage_dispatch, simulate_runs, solve_planner)

from helpers import two_gen_uniform

BIDS = [(1.0, 3.0), (2.0, 6.0)]
RISK = RiskParams(alpha=0.8, epsilon=0.0)
DIST = UniformRenewable(1.0)


def test_settlement_reference_values():
    rec = run_mechanism(BIDS, 2.0, RISK, DIST, realized_w=0.4)
    assert abs(rec.stage1_qty[0] - 0.7543219387857801) <= 1e-9
    assert abs(rec.stage1_payment[0] - 1.1380031746705042) <= 1e-8
    assert abs(rec.p2_at_w - 1.8740683672853187) <= 1e-8
    assert abs(rec.stage2_qty[0] - 0.3123447278808865) <= 1e-9


def test_settlement_surplus_output():
    rec = run_mechanism(BIDS, 2.0, RISK, DIST, realized_w=0.95)
    assert rec.realized_w > rec.y_star
    assert np.all(rec.stage2_qty == 0.0)
    assert np.all(rec.stage2_payment == 0.0)


def test_duplicate_bids_rejected():
    with pytest.raises(BidRejectedError, match="a_i pairwise distinct"):
        run_mechanism([(1.0, 3.0), (1.0, 6.0)], 2.0, RISK, DIST, 0.4)
    with pytest.raises(BidRejectedError, match="max a_i must be < min a_tilde_i"):
        run_mechanism([(1.0, 3.0), (4.0, 6.0)], 2.0, RISK, DIST, 0.4)


def test_realized_w_outside_support():
    with pytest.raises(ValueError):
        run_mechanism(BIDS, 2.0, RISK, DIST, 1.2)


def test_settlement_matches_planner_allocation():
    inst = two_gen_uniform()
    sol = solve_planner(inst)
    for w in (0.0, 0.2, 0.55, 0.868, 1.0):
        rec = run_mechanism(BIDS, 2.0, RISK, DIST, w)
        assert np.max(np.abs(rec.stage1_qty - sol.x_star)) <= 1e-10
        z, _ = second_stage_dispatch(sol.y_star, w, inst)
        assert np.max(np.abs(rec.stage2_qty - z)) <= 1e-10


def test_supply_meets_demand_with_scheduled_renewables():
    for w in (0.1, 0.4, 0.7):
        rec = run_mechanism(BIDS, 2.0, RISK, DIST, w)
        supplied = float(np.sum(rec.production)) + min(w, rec.y_star)
        assert abs(supplied - 2.0) <= 1e-10


def test_outlay_identity():
    for w in (0.05, 0.3, 0.6, 0.9):
        rec = run_mechanism(BIDS, 2.0, RISK, DIST, w)
        shortfall = max(rec.y_star - w, 0.0)
        expect = rec.p1 * (2.0 - rec.y_star) + rec.p2_at_w * shortfall
        assert abs(rec.iso_outlay - expect) <= 1e-10


def test_profit_closed_form():
    rng = np.random.default_rng(20)
    for _ in range(20):
        w = float(rng.uniform(0.0, 1.0))
        rec = run_mechanism(BIDS, 2.0, RISK, DIST, w)
        for i, (a, at) in enumerate(BIDS):
            profit = generator_realized_profit(rec, i)
            assert abs(profit - (rec.p1**2 / (4 * a) + rec.p2_at_w**2 / (4 * at))) <= 1e-12
            assert profit >= 0.0
            assert abs(profit - rec.profit[i]) <= 1e-12


def test_zero_prices_zero_profit():
    rec = run_mechanism(BIDS, 0.0, RISK, DIST, 0.5)
    assert rec.p1 == 0.0 and rec.p2_at_w == 0.0
    assert np.all(rec.profit == 0.0)


def test_all_quantities_nonnegative():
    rng = np.random.default_rng(22)
    for _ in range(20):
        w = float(rng.uniform(0.0, 1.0))
        rec = run_mechanism(BIDS, 2.0, RISK, DIST, w)
        for arr in (rec.stage1_qty, rec.stage2_qty, rec.stage1_payment,
                    rec.stage2_payment, rec.production, rec.profit):
            assert np.all(arr >= 0.0)
        assert rec.iso_outlay >= 0.0


def test_per_run_clearing_identity():
    records, _ = simulate_runs(BIDS, 2.0, RISK, DIST, 500,
                               np.random.default_rng(9))
    for rec in records:
        shortfall = max(rec.y_star - rec.realized_w, 0.0)
        assert abs(float(np.sum(rec.stage2_qty)) - shortfall) <= 1e-10


def test_simulation_determinism():
    r1, s1 = simulate_runs(BIDS, 2.0, RISK, DIST, 300, np.random.default_rng(7))
    r2, s2 = simulate_runs(BIDS, 2.0, RISK, DIST, 300, np.random.default_rng(7))
    assert s1.mean_iso_outlay == s2.mean_iso_outlay
    assert s1.cvar_iso_outlay == s2.cvar_iso_outlay
    assert np.array_equal(s1.mean_profit, s2.mean_profit)
    assert all(a.realized_w == b.realized_w for a, b in zip(r1, r2))


def test_mean_stage2_outlay_matches_quadrature():
    inst = two_gen_uniform()
    sol = solve_planner(inst)
    expect = 2.0 * inst.agg_a_tilde * inst.dist.partial_power_integral(
        sol.y_star, min(sol.y_star, 1.0), 2)
    _, summary = simulate_runs(BIDS, 2.0, RISK, DIST, 10**4,
                               np.random.default_rng(7))
    assert abs(summary.mean_stage2_outlay - expect) / expect <= 0.01


def test_simulate_rejects_bad_n():
    with pytest.raises(ValueError):
        simulate_runs(BIDS, 2.0, RISK, DIST, 0, np.random.default_rng(1))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from riskmarket import (cvar_recourse, cvar_recourse_derivative, cvar_samples,
                        planner_risk, planner_risk_derivative, var_recourse,
                        var_samples)

from helpers import two_gen_uniform


def test_var_samples_examples():
    assert var_samples([0, 0, 0, 0, 10], 0.8) == 0.0
    assert var_samples([3.5] * 17, 0.42) == 3.5
    assert var_samples(np.arange(1, 101), 0.95) == 95.0


def test_var_samples_empty():
    with pytest.raises(ValueError):
        var_samples([], 0.5)


def test_cvar_samples_examples():
    # shortfall objective is flat at 10 between the kinks for this vector
    assert cvar_samples([0, 0, 0, 0, 10], 0.8) == 10.0
    assert cvar_samples([2.5] * 9, 0.3) == 2.5


def test_cvar_samples_scaling():
    rng = np.random.default_rng(1)
    losses = rng.exponential(1.0, 400)
    assert_allclose(cvar_samples(2.0 * losses, 0.9),
                    2.0 * cvar_samples(losses, 0.9), rtol=1e-12)


def test_cvar_samples_empty():
    with pytest.raises(ValueError):
        cvar_samples([], 0.5)


def test_cvar_samples_matches_slow_minimization():
    # brute evaluation of the shortfall objective on a dense zeta grid
    rng = np.random.default_rng(3)
    losses = rng.gamma(2.0, 1.0, 200)
    alpha = 0.85
    zetas = np.linspace(losses.min(), losses.max(), 20001)
    phi = zetas + np.mean(np.clip(losses[None, :] - zetas[:, None], 0.0, None),
                          axis=1) / (1.0 - alpha)
    assert cvar_samples(losses, alpha) <= phi.min() + 1e-9


def test_cvar_samples_coherence():
    rng = np.random.default_rng(10)
    for _ in range(25):
        n = 1000
        alpha = float(rng.uniform(0.1, 0.95))
        base = rng.normal(1.0, 0.7, n)
        other = rng.normal(0.5, 0.4, n)
        c = float(rng.uniform(-2.0, 2.0))
        t = float(rng.uniform(0.1, 3.0))
        dominated = base - np.abs(rng.normal(0.0, 0.3, n))
        assert cvar_samples(base, alpha) >= cvar_samples(dominated, alpha) - 1e-12
        assert abs(cvar_samples(base + c, alpha)
                   - (cvar_samples(base, alpha) + c)) <= 1e-9
        assert abs(cvar_samples(t * base, alpha)
                   - t * cvar_samples(base, alpha)) <= 1e-9
        assert (cvar_samples(base + other, alpha)
                <= cvar_samples(base, alpha) + cvar_samples(other, alpha) + 1e-9)


def test_var_recourse_cases():
    inst = two_gen_uniform()
    # quantile(0.2) = 0.2 under the uniform output
    assert_allclose(var_recourse(0.5, inst), 2.0 * 0.3**2, rtol=1e-12)
    assert var_recourse(0.1, inst) == 0.0
    assert_allclose(var_recourse(0.2, inst), 0.0, atol=1e-15)


def test_cvar_recourse_value():
    # (1/0.2) * 2 * ((0.5^3 - 0.3^3)/3) = 49/150; cross-checked by the
    # Monte Carlo oracle in the acceptance suite
    inst = two_gen_uniform()
    assert_allclose(cvar_recourse(0.5, inst), 49.0 / 150.0, rtol=1e-12)
    assert cvar_recourse(0.0, inst) == 0.0


def test_cvar_dominates_var():
    inst = two_gen_uniform(alpha=0.7)
    for y in np.linspace(0.0, 1.4, 29):
        cv = cvar_recourse(float(y), inst)
        va = var_recourse(float(y), inst)
        assert cv >= va - 1e-12
        assert va >= 0.0


def test_cvar_recourse_convex_in_y():
    rng = np.random.default_rng(4)
    inst = two_gen_uniform(alpha=0.85)
    for _ in range(1000):
        y1, y2 = sorted(rng.uniform(0.0, 1.5, 2))
        mid = 0.5 * (y1 + y2)
        lhs = cvar_recourse(float(mid), inst)
        rhs = 0.5 * (cvar_recourse(float(y1), inst) + cvar_recourse(float(y2), inst))
        assert lhs <= rhs + 1e-12


def test_cvar_derivative_value_and_fd():
    inst = two_gen_uniform()
    assert_allclose(cvar_recourse_derivative(0.5, inst), 1.6, rtol=1e-12)
    assert cvar_recourse_derivative(0.0, inst) == 0.0
    h = 1e-5
    fd = (cvar_recourse(0.5 + h, inst) - cvar_recourse(0.5 - h, inst)) / (2 * h)
    assert abs(fd - 1.6) / 1.6 <= 1e-7


def test_cvar_derivative_continuous_at_kink():
    inst = two_gen_uniform()
    q = inst.dist.quantile(1.0 - inst.risk.alpha)
    left = cvar_recourse_derivative(q - 1e-9, inst)
    right = cvar_recourse_derivative(q + 1e-9, inst)
    assert abs(left - right) <= 1e-8


def test_planner_risk_collapses_at_weights():
    inst0 = two_gen_uniform(epsilon=0.0)
    inst1 = two_gen_uniform(epsilon=1.0)
    for y in (0.1, 0.4, 0.9):
        # epsilon = 0: plain expectation of the recourse cost
        expect = inst0.agg_a_tilde * inst0.dist.partial_power_integral(y, y, 2)
        assert_allclose(planner_risk(y, inst0), expect, rtol=1e-12)
        assert_allclose(planner_risk(y, inst1), cvar_recourse(y, inst1), rtol=1e-12)


def test_planner_risk_blend_value():
    inst = two_gen_uniform(epsilon=0.5)
    expect = 0.5 * 2.0 * (0.125 / 3.0) + 0.5 * (49.0 / 150.0)
    assert_allclose(planner_risk(0.5, inst), expect, rtol=1e-12)


def test_planner_risk_derivative_fd():
    rng = np.random.default_rng(6)
    for eps in (0.0, 0.3, 1.0):
        inst = two_gen_uniform(epsilon=eps)
        for _ in range(10):
            y = float(rng.uniform(0.05, 0.95))
            h = 1e-6
            fd = (planner_risk(y + h, inst) - planner_risk(y - h, inst)) / (2 * h)
            assert abs(fd - planner_risk_derivative(y, inst)) <= 1e-7


def test_planner_risk_valid_beyond_support():
    # schedules above w_max clamp the expectation limit at the support edge
    inst = two_gen_uniform(epsilon=0.5)
    val = planner_risk(1.3, inst)
    expect = (0.5 * 2.0 * inst.dist.partial_power_integral(1.3, 1.0, 2)
              + 0.5 * cvar_recourse(1.3, inst))
    assert_allclose(val, expect, rtol=1e-12)

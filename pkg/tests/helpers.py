"""Shared fixtures-by-hand: reference instances, a Simpson quadrature oracle,
and a random valid-instance generator used by the property suites."""

import numpy as np

from riskmarket import (GeneratorParams, MarketInstance,
                        PiecewiseLinearRenewable, RiskParams,
                        TruncatedNormalRenewable, UniformRenewable)


def two_gen_uniform(epsilon=0.0, alpha=0.8) -> MarketInstance:
    """Two generators a=(1,2), a_tilde=(3,6), demand 2, uniform output on
    [0,1]; aggregates are 2/3 and 2."""
    return MarketInstance(
        generators=(GeneratorParams(1.0, 3.0), GeneratorParams(2.0, 6.0)),
        demand=2.0,
        risk=RiskParams(alpha=alpha, epsilon=epsilon),
        dist=UniformRenewable(1.0),
    )


def simpson_partial(dist, y, theta, k, panels=10_000):
    """Composite-Simpson reference for the partial power moment."""
    if theta <= 0.0:
        return 0.0
    w = np.linspace(0.0, theta, 2 * panels + 1)
    g = (y - w) ** k * dist.pdf(w)
    h = theta / (2 * panels)
    return h / 3.0 * (g[0] + g[-1] + 4.0 * np.sum(g[1:-1:2]) + 2.0 * np.sum(g[2:-1:2]))


def random_distribution(rng):
    kind = rng.integers(0, 3)
    w_max = float(rng.uniform(0.5, 2.0))
    if kind == 0:
        return UniformRenewable(w_max)
    if kind == 1:
        return TruncatedNormalRenewable(
            w_max,
            loc=float(rng.uniform(0.1, 0.9)) * w_max,
            scale=float(rng.uniform(0.1, 0.6)) * w_max,
        )
    m = int(rng.integers(3, 6))
    inner = np.sort(rng.uniform(0.08, 0.92, m - 2)) * w_max
    while np.any(np.diff(inner) < 1e-3):
        inner = np.sort(rng.uniform(0.08, 0.92, m - 2)) * w_max
    ws = np.concatenate([[0.0], inner, [w_max]])
    fs = rng.uniform(0.2, 2.0, m)
    return PiecewiseLinearRenewable(tuple(zip(ws, fs)))


def random_instance(rng) -> MarketInstance:
    """A valid instance: distinct coefficients with max a < min a_tilde."""
    n = int(rng.integers(1, 5))
    a = np.sort(rng.uniform(0.5, 3.0, n))
    while n > 1 and np.any(np.diff(a) < 1e-3):
        a = np.sort(rng.uniform(0.5, 3.0, n))
    at = a.max() + np.sort(rng.uniform(0.1, 3.0, n))
    while n > 1 and np.any(np.diff(at) < 1e-3):
        at = a.max() + np.sort(rng.uniform(0.1, 3.0, n))
    gens = tuple(GeneratorParams(float(x), float(y)) for x, y in zip(a, at))
    return MarketInstance(
        generators=gens,
        demand=float(rng.uniform(0.2, 4.0)),
        risk=RiskParams(alpha=float(rng.uniform(0.05, 0.95)),
                        epsilon=float(rng.uniform(0.0, 1.0))),
        dist=random_distribution(rng),
    )

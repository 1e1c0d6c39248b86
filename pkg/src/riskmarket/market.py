"""Market instance data: generator cost coefficients, demand, risk weights.

Validation messages name the violated rule verbatim so that bid intake and
scenario parsing can surface them unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import RenewableDistribution

__all__ = ["RiskParams", "GeneratorParams", "MarketInstance"]


@dataclass(frozen=True)
class RiskParams:
    """Tail level alpha in (0, 1) and expectation/CVaR blend weight epsilon."""

    alpha: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha in (0,1), got {self.alpha}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon in [0,1], got {self.epsilon}")


@dataclass(frozen=True)
class GeneratorParams:
    """Quadratic cost coefficients: `a` for the forward plant, `a_tilde` for
    the more expensive real-time plant."""

    a: float
    a_tilde: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"a must be > 0, got {self.a}")
        if not self.a_tilde > 0.0:
            raise ValueError(f"a_tilde must be > 0, got {self.a_tilde}")
        if not self.a < self.a_tilde:
            raise ValueError(f"a must be < a_tilde, got a={self.a}, a_tilde={self.a_tilde}")


@dataclass(frozen=True)
class MarketInstance:
    """One clearing problem: generators, inelastic demand, risk attitude,
    and the renewable-output distribution."""

    generators: tuple[GeneratorParams, ...]
    demand: float
    risk: RiskParams
    dist: RenewableDistribution

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) == 0:
            raise ValueError("at least one generator required")
        if not self.demand >= 0.0:
            raise ValueError(f"demand must be >= 0, got {self.demand}")
        a = [g.a for g in gens]
        at = [g.a_tilde for g in gens]
        if len(set(a)) != len(a):
            raise ValueError("a_i pairwise distinct")
        if len(set(at)) != len(at):
            raise ValueError("a_tilde_i pairwise distinct")
        if not max(a) < min(at):
            raise ValueError("max a_i must be < min a_tilde_i")

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def a_coeffs(self) -> np.ndarray:
        return np.array([g.a for g in self.generators])

    @property
    def a_tilde_coeffs(self) -> np.ndarray:
        return np.array([g.a_tilde for g in self.generators])

    @property
    def agg_a(self) -> float:
        """Harmonic aggregate of the forward coefficients: the cost
        coefficient of the fleet treated as one quadratic plant."""
        return float(1.0 / np.sum(1.0 / self.a_coeffs))

    @property
    def agg_a_tilde(self) -> float:
        return float(1.0 / np.sum(1.0 / self.a_tilde_coeffs))

"""Scenario-file ingestion.

A scenario is a JSON object with the fixed schema

    {
      "demand": 2.0,
      "alpha": 0.8,
      "epsilon": 0.5,
      "distribution": {"kind": "uniform", "w_max": 1.0},
      "generators": [{"a": 1.0, "a_tilde": 3.0}, ...],
      "seed": 7,             # optional
      "w_grid_points": 1001  # optional
    }

Unknown keys are rejected and every validation failure names the offending
field path and the violated rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .distributions import (PiecewiseLinearRenewable, RenewableDistribution,
                            TruncatedNormalRenewable, UniformRenewable)
from .market import GeneratorParams, MarketInstance, RiskParams

__all__ = ["ScenarioError", "ScenarioConfig", "parse_scenario", "load_scenario"]

_TOP_REQUIRED = ("demand", "alpha", "epsilon", "distribution", "generators")
_TOP_OPTIONAL = ("seed", "w_grid_points")


class ScenarioError(ValueError):
    """Scenario document is malformed or violates a market assumption."""


@dataclass(frozen=True)
class ScenarioConfig:
    demand: float
    risk: RiskParams
    dist: RenewableDistribution
    generators: tuple[GeneratorParams, ...]
    seed: int | None
    w_grid_points: int

    def to_instance(self) -> MarketInstance:
        return MarketInstance(generators=self.generators, demand=self.demand,
                              risk=self.risk, dist=self.dist)


def _number(obj: dict, key: str, path: str) -> float:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ScenarioError(f"{path}: expected a number")
    return float(val)


def _parse_distribution(obj) -> RenewableDistribution:
    if not isinstance(obj, dict):
        raise ScenarioError("distribution: expected an object")
    kind = obj.get("kind")
    if kind == "uniform":
        allowed = {"kind", "w_max"}
    elif kind == "truncated-normal":
        allowed = {"kind", "w_max", "loc", "scale"}
    elif kind == "piecewise-linear-pdf":
        allowed = {"kind", "breakpoints"}
    else:
        raise ScenarioError(
            "distribution.kind: expected one of uniform, truncated-normal, "
            "piecewise-linear-pdf")
    for key in sorted(set(obj) - allowed):
        raise ScenarioError(f"distribution.{key}: unknown key")
    for key in sorted(allowed - {"kind"} - set(obj)):
        raise ScenarioError(f"distribution.{key}: required key missing")
    try:
        if kind == "uniform":
            return UniformRenewable(w_max=_number(obj, "w_max", "distribution.w_max"))
        if kind == "truncated-normal":
            return TruncatedNormalRenewable(
                w_max=_number(obj, "w_max", "distribution.w_max"),
                loc=_number(obj, "loc", "distribution.loc"),
                scale=_number(obj, "scale", "distribution.scale"))
        pts = obj["breakpoints"]
        if (not isinstance(pts, list)
                or any(not isinstance(p, list) or len(p) != 2 for p in pts)):
            raise ScenarioError(
                "distribution.breakpoints: expected a list of [w, f] pairs")
        return PiecewiseLinearRenewable(
            breakpoints=tuple((float(w), float(f)) for w, f in pts))
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"distribution: {exc}") from exc


def parse_scenario(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"syntax: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("top level: expected an object")
    for key in sorted(set(data) - set(_TOP_REQUIRED) - set(_TOP_OPTIONAL)):
        raise ScenarioError(f"{key}: unknown key")
    for key in _TOP_REQUIRED:
        if key not in data:
            raise ScenarioError(f"{key}: required key missing")

    demand = _number(data, "demand", "demand")
    if demand < 0.0:
        raise ScenarioError("demand: must be >= 0")
    alpha = _number(data, "alpha", "alpha")
    if not 0.0 < alpha < 1.0:
        raise ScenarioError(f"alpha: alpha in (0,1), got {alpha}")
    epsilon = _number(data, "epsilon", "epsilon")
    if not 0.0 <= epsilon <= 1.0:
        raise ScenarioError(f"epsilon: epsilon in [0,1], got {epsilon}")
    dist = _parse_distribution(data["distribution"])

    raw_gens = data["generators"]
    if not isinstance(raw_gens, list) or not raw_gens:
        raise ScenarioError("generators: expected a nonempty list")
    gens = []
    for i, entry in enumerate(raw_gens):
        path = f"generators[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError(f"{path}: expected an object")
        for key in sorted(set(entry) - {"a", "a_tilde"}):
            raise ScenarioError(f"{path}.{key}: unknown key")
        for key in ("a", "a_tilde"):
            if key not in entry:
                raise ScenarioError(f"{path}.{key}: required key missing")
        try:
            gens.append(GeneratorParams(a=_number(entry, "a", f"{path}.a"),
                                        a_tilde=_number(entry, "a_tilde", f"{path}.a_tilde")))
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc

    seed = None
    if "seed" in data:
        if isinstance(data["seed"], bool) or not isinstance(data["seed"], int):
            raise ScenarioError("seed: expected an integer")
        seed = data["seed"]
    points = 1001
    if "w_grid_points" in data:
        if isinstance(data["w_grid_points"], bool) or not isinstance(data["w_grid_points"], int):
            raise ScenarioError("w_grid_points: expected an integer")
        points = data["w_grid_points"]
        if points < 2:
            raise ScenarioError("w_grid_points: must be >= 2")

    try:
        config = ScenarioConfig(demand=demand, risk=RiskParams(alpha=alpha, epsilon=epsilon),
                                dist=dist, generators=tuple(gens), seed=seed,
                                w_grid_points=points)
        config.to_instance()
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"generators: {exc}") from exc
    return config


def load_scenario(path: str | Path) -> ScenarioConfig:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))

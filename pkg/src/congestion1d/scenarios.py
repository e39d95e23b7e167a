"""Initial data: the four crowd test cases and user-supplied profiles.

Piecewise conditions ``a < x < b`` are evaluated at cell centres.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import FlowState, Grid1D


class ScenarioKind(str, enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    CUSTOM = "custom"


DESCRIPTIONS = {
    "case1": "constant congestion density; opposite velocities create a shock and a rarefaction",
    "case2": "two groups moving towards each other inside a smooth hat of congestion density",
    "case3": "fast dense group pushing into a slow sparse group with lower congestion density",
    "case4": "congestion density as a sum of cosines of different frequencies",
}

Profile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind
    rho0: Profile | None = None
    u0: Profile | None = None
    rho_star0: Profile | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if self.kind is ScenarioKind.CUSTOM and None in (self.rho0, self.u0, self.rho_star0):
            raise ValueError("a custom scenario needs rho0, u0 and rho_star0 profiles")

    @property
    def name(self) -> str:
        return self.kind.value


def _inside(x, a, b):
    return (x > a) & (x < b)


def _case1(x):
    rho = np.full_like(x, 0.7)
    rho_star = np.full_like(x, 1.0)
    u = np.where(_inside(x, 0.2, 0.6), 0.8, -0.8)
    return rho, u, rho_star


def _case2(x):
    rho = np.full_like(x, 0.7)
    rho_star = 0.8 + 0.15 * (np.tanh(50 * (x - 0.4)) - np.tanh(50 * (x - 0.6)))
    u = np.where(_inside(x, 0.25, 0.5), 0.8, np.where(_inside(x, 0.5, 0.75), -0.8, 0.0))
    return rho, u, rho_star


def _case3(x):
    rho = np.where(_inside(x, 0.3, 0.7), 0.8, 0.1)
    rho_star = 0.34 + 0.3 * (np.tanh(50 * (x - 0.275)) - np.tanh(50 * (x - 0.725)))
    u = np.where(_inside(x, 0.1, 0.7), 0.8, 0.0)
    return rho, u, rho_star


def _case4(x):
    rho = np.full_like(x, 0.6)
    rho_star = 0.9 + 0.05 * (
        np.cos(10 * np.pi * x) - np.cos(6 * np.pi * x) + np.cos(134 * np.pi * x) + np.cos(24 * np.pi * x)
    )
    u = np.where(_inside(x, 0.3, 0.7), 0.8, -0.8)
    return rho, u, rho_star


_BUILDERS = {
    ScenarioKind.CASE1: _case1,
    ScenarioKind.CASE2: _case2,
    ScenarioKind.CASE3: _case3,
    ScenarioKind.CASE4: _case4,
}

STANDARD_CASES = tuple(k.value for k in _BUILDERS)


def get_scenario(name: str) -> Scenario:
    try:
        kind = ScenarioKind(name)
    except ValueError:
        raise ValueError(f"unknown scenario {name!r}; valid: {', '.join(STANDARD_CASES)}") from None
    if kind is ScenarioKind.CUSTOM:
        raise ValueError("custom scenarios are built with Scenario(kind='custom', ...)")
    return Scenario(kind)


def profiles(scenario: Scenario, x):
    """Evaluate ``(rho0, u0, rho_star0)`` at the points ``x``."""
    x = np.asarray(x, dtype=float)
    if scenario.kind is ScenarioKind.CUSTOM:
        return tuple(
            np.broadcast_to(np.asarray(f(x), dtype=float), x.shape).copy()
            for f in (scenario.rho0, scenario.u0, scenario.rho_star0)
        )
    return _BUILDERS[scenario.kind](x)


def initialize(scenario: Scenario, grid: Grid1D) -> FlowState:
    rho, u, rho_star = profiles(scenario, grid.centers)
    if np.any(rho_star <= 0):
        raise ValueError(f"{scenario.name}: initial congestion density must be positive")
    if np.any(rho < 0):
        raise ValueError(f"{scenario.name}: initial density must be non-negative")
    if np.any(rho >= rho_star):
        i = int(np.argmax(rho / rho_star))
        raise ValueError(
            f"{scenario.name}: initial density reaches the congestion density in cell {i}"
        )
    return FlowState(rho=rho, momentum=rho * u, rho_star=rho_star, time=0.0)

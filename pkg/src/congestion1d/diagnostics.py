"""Monitored quantities of a run: mass, energy, constraint, congestion bounds."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from . import pressure as pl
from .grid import FlowState, Grid1D, density_fraction, velocity


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    total_mass: float
    total_energy: float
    max_Z: float
    rho_star_min: float
    rho_star_max: float
    newton_iterations: int
    max_wave_speed: float
    cfl_ok: bool

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def as_dict(self):
        return asdict(self)


def total_mass(state: FlowState, grid: Grid1D) -> float:
    return float(np.sum(state.rho) * grid.dx)


def discrete_energy(
    state: FlowState, params: pl.PressureParams, grid: Grid1D, floor: float = 1e-10
) -> float:
    """``sum(rho u**2 / 2 + Z Gamma(Z)) dx``."""
    z = density_fraction(state)
    u = velocity(state, floor)
    kinetic = 0.5 * state.rho * u**2
    internal = z * pl.energy_density_gamma(z, params)
    return float(np.sum(kinetic + internal) * grid.dx)


def constraint_report(state: FlowState):
    """``(max Z, cell index)``; the index is ``None`` for an empty crowd."""
    z = density_fraction(state)
    i = int(np.argmax(z))
    if z[i] == 0:
        return 0.0, None
    return float(z[i]), i


def reflection_error(state: FlowState, grid: Grid1D, center: float) -> float:
    """Sup-norm defect of the mirror symmetry ``x -> 2 center - x``.

    Density and congestion density are compared as even fields, momentum as
    an odd one. ``center`` must be a cell centre or a cell face.
    """
    if not grid.periodic:
        raise ValueError("reflection error is defined on periodic grids only")
    k = 2.0 * center / grid.dx - 1.0
    shift = round(k)
    if abs(k - shift) > 1e-9:
        raise ValueError(f"reflection centre {center} is not aligned with the mesh")
    i = np.arange(grid.n_cells)
    j = (shift - i) % grid.n_cells
    err = (
        np.abs(state.rho - state.rho[j])
        + np.abs(state.momentum + state.momentum[j])
        + np.abs(state.rho_star - state.rho_star[j])
    )
    return float(np.max(err))

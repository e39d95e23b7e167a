"""Time stepping: hyperbolic step, viscous step, congestion transport.

A run keeps the time step fixed; the wave-speed CFL condition is monitored
and either aborts the run or is only flagged, depending on the config.
"""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import pressure as pl
from .diagnostics import DiagnosticsRecord, discrete_energy, total_mass
from .diffusion import solve_diffusion
from .errors import CflViolation, NewtonFailure
from .grid import FlowState, Grid1D, density_fraction, new_uniform_grid, velocity
from .hyperbolic import NewtonConfig, check_cfl, hyperbolic_step, max_wave_speed
from .scenarios import Scenario, get_scenario, initialize
from .transport import transport_rho_star

log = logging.getLogger(__name__)


class RunStatus(str, enum.Enum):
    COMPLETED = "Completed"
    CFL_VIOLATION = "CflViolation"
    NEWTON_FAILURE = "NewtonFailure"


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    grid: Grid1D
    dt: float = 1e-4
    t_end: float = 0.1
    params: pl.PressureParams = pl.PressureParams()
    mu: float = 1e-3
    sigma: float = 0.5
    newton: NewtonConfig = NewtonConfig()
    snapshot_times: tuple = ()
    velocity_floor: float = 1e-10
    cfl_policy: str = "abort"
    outer_divergence: str = "centered"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        if not 0 < self.sigma <= 1:
            raise ValueError("Courant number must lie in (0, 1]")
        if self.mu < 0:
            raise ValueError("viscosity must be non-negative")
        if not self.velocity_floor > 0:
            raise ValueError("velocity floor must be positive")
        if self.cfl_policy not in ("abort", "warn"):
            raise ValueError("cfl_policy must be 'abort' or 'warn'")
        times = tuple(sorted(float(t) for t in self.snapshot_times))
        if any(t < 0 or t > self.t_end + 1e-12 for t in times):
            raise ValueError("snapshot times must lie in [0, t_end]")
        object.__setattr__(self, "snapshot_times", times)

    @property
    def n_steps(self) -> int:
        k = self.t_end / self.dt
        return int(round(k)) if abs(k - round(k)) < 1e-9 * max(1.0, k) else math.ceil(k)

    def step_index(self, t: float) -> int:
        return min(int(round(t / self.dt)), self.n_steps)


def standard_config(scenario="case1", **overrides) -> RunConfig:
    """Config with the published defaults: unit interval, N = 1000, dt = 1e-4,
    eps = 1e-4, alpha = beta = gamma = 2, snapshots at the figure times."""
    if isinstance(scenario, str):
        scenario = get_scenario(scenario)
    t_end = 0.5 if scenario.name == "case4" else 0.1
    snaps = (0.0, 0.1, 0.25, 0.5) if scenario.name == "case4" else (0.0, 0.05, 0.1)
    base = dict(
        scenario=scenario,
        grid=new_uniform_grid(1.0, 1000),
        t_end=t_end,
        snapshot_times=snaps,
    )
    base.update(overrides)
    if "t_end" in overrides and "snapshot_times" not in overrides:
        kept = {t for t in snaps if t <= base["t_end"]}
        base["snapshot_times"] = tuple(sorted(kept | {base["t_end"]}))
    return RunConfig(**base)


@dataclass
class Snapshot:
    time: float
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    rho_star: np.ndarray
    pi: np.ndarray

    @property
    def Z(self) -> np.ndarray:
        return self.rho / self.rho_star


@dataclass
class RunResult:
    config: RunConfig
    snapshots: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    status: RunStatus = RunStatus.COMPLETED
    message: str = ""
    final_state: FlowState | None = None

    @property
    def epsilon(self) -> float:
        return self.config.params.epsilon

    @property
    def newton_iterations(self) -> np.ndarray:
        return np.array([d.newton_iterations for d in self.diagnostics[1:]], dtype=int)

    @property
    def max_Z_series(self):
        return [(d.time, d.max_Z) for d in self.diagnostics]

    def snapshot_at(self, t: float) -> Snapshot:
        best = min(self.snapshots, key=lambda s: abs(s.time - t))
        if abs(best.time - t) > 0.5 * self.config.dt:
            raise KeyError(f"no snapshot at t = {t}")
        return best


def _record(state, config, grid, iterations, speed, cfl_ok):
    z = density_fraction(state)
    return DiagnosticsRecord(
        time=state.time,
        total_mass=total_mass(state, grid),
        total_energy=discrete_energy(state, config.params, grid, config.velocity_floor),
        max_Z=float(np.max(z)),
        rho_star_min=float(np.min(state.rho_star)),
        rho_star_max=float(np.max(state.rho_star)),
        newton_iterations=int(iterations),
        max_wave_speed=float(speed),
        cfl_ok=bool(cfl_ok),
    )


def _snapshot(state, config):
    pi = state.pi
    if pi is None:
        pi = np.asarray(pl.singular_pressure(density_fraction(state), config.params), dtype=float)
    return Snapshot(
        time=state.time,
        x=config.grid.centers,
        rho=state.rho.copy(),
        u=velocity(state, config.velocity_floor),
        rho_star=state.rho_star.copy(),
        pi=pi.copy(),
    )


def step(state: FlowState, config: RunConfig, step_number: int | None = None):
    """Advance ``state`` by one time step; returns ``(new_state, record)``."""
    grid, params, dt, floor = config.grid, config.params, config.dt, config.velocity_floor
    t_new = state.time + dt if step_number is None else step_number * dt

    speed = max_wave_speed(state, params, floor)
    cfl_ok = check_cfl(speed, dt, grid.dx, config.sigma)
    if not cfl_ok:
        bound = config.sigma * grid.dx / dt
        msg = f"wave speed {speed:.6g} exceeds sigma dx/dt = {bound:.6g}"
        if config.cfl_policy == "abort":
            raise CflViolation(msg, speed, bound, time=state.time)
        log.warning("t=%.6g: %s", state.time, msg)

    try:
        hyp = hyperbolic_step(state, params, dt, grid, config.newton, floor, config.outer_divergence)
    except NewtonFailure as exc:
        exc.time = state.time
        raise
    rho_new = hyp.rho_new
    u_star = hyp.momentum_star / np.maximum(rho_new, floor)
    u_new = solve_diffusion(np.maximum(rho_new, floor), u_star, config.mu, dt, grid)
    try:
        rho_star_new = transport_rho_star(state.rho_star, u_new, dt, grid)
    except CflViolation as exc:
        exc.time = state.time
        raise

    new = FlowState(rho=rho_new, momentum=rho_new * u_new, rho_star=rho_star_new, time=t_new, pi=hyp.pi)
    return new, _record(new, config, grid, hyp.newton_iterations, speed, cfl_ok)


def run(config: RunConfig) -> RunResult:
    """Integrate from the scenario's initial data to ``config.t_end``.

    Newton and CFL failures end the run early; the result then carries the
    failure status, a message with the failing time, and everything recorded
    up to that point.
    """
    grid = config.grid
    state = initialize(config.scenario, grid)
    result = RunResult(config=config)
    speed0 = max_wave_speed(state, config.params, config.velocity_floor)
    result.diagnostics.append(
        _record(state, config, grid, 0, speed0, check_cfl(speed0, config.dt, grid.dx, config.sigma))
    )
    wanted = sorted({config.step_index(t) for t in config.snapshot_times} | {0})
    if config.n_steps == 0:
        wanted = [0]
    if 0 in wanted:
        result.snapshots.append(_snapshot(state, config))

    for k in range(1, config.n_steps + 1):
        try:
            state, rec = step(state, config, step_number=k)
        except NewtonFailure as exc:
            result.status = RunStatus.NEWTON_FAILURE
            result.message = f"t={exc.time:.6g}: {exc}"
            break
        except CflViolation as exc:
            result.status = RunStatus.CFL_VIOLATION
            result.message = str(exc) if exc.time is None else f"t={exc.time:.6g}: {exc}"
            break
        result.diagnostics.append(rec)
        if k in wanted:
            result.snapshots.append(_snapshot(state, config))
    result.final_state = state
    if result.status is not RunStatus.COMPLETED:
        log.error("%s run stopped: %s", config.scenario.name, result.message)
    return result


def run_epsilon_sweep(config: RunConfig, epsilons, max_workers: int | None = None) -> list:
    """Repeat ``config`` for each singular-pressure scale in ``epsilons``.

    Runs are independent; with ``max_workers > 1`` they execute in separate
    processes. Failures are reported per run through ``RunResult.status``.
    """
    epsilons = [float(e) for e in epsilons]
    if not epsilons or any(not e > 0 for e in epsilons):
        raise ValueError("epsilons must be a non-empty list of positive values")
    configs = [replace(config, params=config.params.with_epsilon(e)) for e in epsilons]
    if max_workers and max_workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(run, configs))
    return [run(c) for c in configs]


def sweep_report(results) -> list:
    """Per-run summary: status, Newton iteration statistics, max Z history."""
    rows = []
    for r in results:
        its = r.newton_iterations
        rows.append(
            {
                "epsilon": r.epsilon,
                "status": r.status.value,
                "steps": int(its.size),
                "newton_median": float(np.median(its)) if its.size else 0.0,
                "newton_max": int(its.max()) if its.size else 0,
                "max_Z": max(z for _, z in r.max_Z_series),
                "max_Z_series": r.max_Z_series,
            }
        )
    return rows

"""Step 1 of the splitting: implicit mass flux and singular pressure.

The momentum is eliminated from the mass balance, which leaves a nonlinear
elliptic equation for the singular pressure

    rho*_i Z(pi_i) - dt**2 (L pi)_i = phi_i,

solved by Newton's method with a finite-difference Jacobian. The density is
then recovered through the monotone inverse of the pressure law (so it stays
strictly below the congestion density) and the momentum is updated directly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import pressure as pl
from .errors import NewtonFailure
from .grid import FlowState, Grid1D, density_fraction, velocity
from .linalg import assemble_newton_jacobian, solve_cyclic_tridiagonal
from .spatial import gradient_centered, laplacian, rusanov_divergence

log = logging.getLogger(__name__)

OUTER_DIVERGENCE = ("centered", "rusanov")


@dataclass(frozen=True)
class NewtonConfig:
    tolerance: float = 1e-10
    max_iterations: int = 50
    fd_step: float = 1e-7
    damping: float = 1.0
    # bound on |sum(F) dx|, the mass defect a converged solve leaves behind
    mass_tolerance: float = 1e-15

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("Newton tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if not self.mass_tolerance > 0:
            raise ValueError("mass_tolerance must be positive")


@dataclass
class NewtonResult:
    pi: np.ndarray
    iterations: int
    residual: float
    history: list = field(default_factory=list)


@dataclass
class HyperbolicResult:
    pi: np.ndarray
    rho_new: np.ndarray
    momentum_star: np.ndarray
    newton_iterations: int
    final_residual: float


@dataclass
class _Explicit:
    u: np.ndarray
    z: np.ndarray
    speed: np.ndarray
    mass_div: np.ndarray
    momentum_flux_div: np.ndarray
    background_grad: np.ndarray


def _explicit_terms(state: FlowState, params, grid: Grid1D, floor: float) -> _Explicit:
    u = velocity(state, floor)
    z = density_fraction(state)
    speed = np.abs(u) + np.sqrt(pl.background_pressure_derivative(z, params))
    mass_div = rusanov_divergence(state.momentum, state.rho, speed, grid)
    mom_div = rusanov_divergence(state.momentum * u, state.momentum, speed, grid, odd=True)
    grad_p = gradient_centered(pl.background_pressure(z, params), grid)
    return _Explicit(u, z, speed, mass_div, mom_div, grad_p)


def _phi(state, ex: _Explicit, dt, grid, outer):
    bracket = ex.momentum_flux_div + ex.background_grad
    if outer == "centered":
        outer_div = gradient_centered(bracket, grid, odd=True)
    elif outer == "rusanov":
        outer_div = rusanov_divergence(bracket, state.momentum, ex.speed, grid, odd=True)
    else:
        raise ValueError(f"outer divergence must be one of {OUTER_DIVERGENCE}, got {outer!r}")
    return state.rho - dt * ex.mass_div + dt**2 * outer_div


def compute_phi(
    state: FlowState,
    params: pl.PressureParams,
    dt: float,
    grid: Grid1D,
    floor: float = 1e-10,
    outer: str = "centered",
) -> np.ndarray:
    """Explicit right-hand side of the pressure equation.

    ``phi = rho - dt div(rho u) + dt**2 div(div(rho u u) + grad p)``; the inner
    divergences use Rusanov fluxes, ``grad p`` and the outer divergence are
    centred. Every correction telescopes, so ``sum(phi) == sum(rho)``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    return _phi(state, _explicit_terms(state, params, grid, floor), dt, grid, outer)


def _pi_min(params):
    return pl.singular_pressure(0.0, params)


def newton_solve_pi(
    phi,
    rho_star,
    params: pl.PressureParams,
    dt: float,
    grid: Grid1D,
    cfg: NewtonConfig = NewtonConfig(),
    pi0=None,
) -> NewtonResult:
    """Solve ``rho_star * Z(pi) - dt**2 L pi = phi`` for ``pi >= 0``.

    Converged means ``max|F| <= cfg.tolerance`` and ``|sum(F)| dx <=
    cfg.mass_tolerance``; the second keeps the mass drift of long runs at
    rounding level.

    Globalised by backtracking on the sup-norm of the residual with iterates
    projected onto the range of the pressure law. Raises NewtonFailure with
    the residual history when ``cfg.max_iterations`` is exhausted.
    """
    phi = np.asarray(phi, dtype=float)
    rho_star = np.asarray(rho_star, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise FloatingPointError("non-finite right-hand side")
    if np.any(rho_star <= 0):
        raise ValueError("congestion density must be positive")
    coupling = dt**2
    lo = _pi_min(params)

    def cell_density(p):
        return rho_star * pl.invert_singular_pressure(p, params)

    def residual(p):
        return cell_density(p) - coupling * laplacian(p, grid) - phi

    if pi0 is None:
        z0 = np.clip(phi / rho_star, 0.0, 1.0 - 1e-6)
        pi = np.asarray(pl.singular_pressure(z0, params), dtype=float)
    else:
        pi = np.maximum(np.asarray(pi0, dtype=float), lo)

    def converged(res, norm):
        return norm <= cfg.tolerance and abs(float(np.sum(res))) * grid.dx <= cfg.mass_tolerance

    res = residual(pi)
    norm = float(np.max(np.abs(res)))
    history = [norm]
    it = 0
    pi_floor = 1e-8 * params.epsilon
    while not converged(res, norm):
        if it >= cfg.max_iterations:
            raise NewtonFailure(
                f"Newton did not converge in {cfg.max_iterations} iterations "
                f"(residual {norm:.3e} > {cfg.tolerance:.1e})",
                history,
            )
        jac = assemble_newton_jacobian(pi, cell_density, coupling, grid, cfg.fd_step, pi_floor)
        step = solve_cyclic_tridiagonal(jac, -res)
        lam = cfg.damping
        best = None
        for _ in range(40):
            trial = np.maximum(pi + lam * step, lo)
            r_trial = residual(trial)
            n_trial = float(np.max(np.abs(r_trial)))
            if best is None or n_trial < best[2]:
                best = (trial, r_trial, n_trial)
            if n_trial <= (1.0 - 1e-4 * lam) * norm:
                break
            lam *= 0.5
        pi, res, norm = best
        history.append(norm)
        it += 1
    return NewtonResult(pi, it, norm, history)


def recover_density(pi, rho_star, params: pl.PressureParams) -> np.ndarray:
    """``rho = rho_star * Z(pi)``, strictly below ``rho_star`` in every cell."""
    rho_star = np.asarray(rho_star, dtype=float)
    z = np.asarray(pl.invert_singular_pressure(pi, params), dtype=float)
    return np.minimum(rho_star * z, np.nextafter(rho_star, 0.0))


def _momentum_star(state, ex: _Explicit, pi_new, dt, grid):
    grad_pi = gradient_centered(pi_new, grid)
    return state.momentum - dt * (ex.momentum_flux_div + ex.background_grad + grad_pi)


def update_momentum_direct(
    state: FlowState,
    pi_new,
    params: pl.PressureParams,
    dt: float,
    grid: Grid1D,
    floor: float = 1e-10,
) -> np.ndarray:
    """Momentum after the hyperbolic step: explicit convection and background
    pressure gradient, implicit (new) singular pressure gradient."""
    ex = _explicit_terms(state, params, grid, floor)
    return _momentum_star(state, ex, np.asarray(pi_new, dtype=float), dt, grid)


def max_wave_speed(state: FlowState, params: pl.PressureParams, floor: float = 1e-10) -> float:
    """``max |u| + sqrt(p'(Z))`` over the cells."""
    u = velocity(state, floor)
    z = density_fraction(state)
    return float(np.max(np.abs(u) + np.sqrt(pl.background_pressure_derivative(z, params))))


def check_cfl(lambda_max: float, dt: float, dx: float, sigma: float) -> bool:
    return lambda_max <= sigma * dx / dt


def hyperbolic_step(
    state: FlowState,
    params: pl.PressureParams,
    dt: float,
    grid: Grid1D,
    cfg: NewtonConfig = NewtonConfig(),
    floor: float = 1e-10,
    outer: str = "centered",
) -> HyperbolicResult:
    """Run the whole first sub-step on ``state`` (which is not modified)."""
    ex = _explicit_terms(state, params, grid, floor)
    phi = _phi(state, ex, dt, grid, outer)
    if state.pi is not None:
        pi0 = state.pi
    else:
        pi0 = pl.singular_pressure(np.minimum(ex.z, 1.0 - 1e-6), params)
    sol = newton_solve_pi(phi, state.rho_star, params, dt, grid, cfg, pi0=pi0)
    rho_new = recover_density(sol.pi, state.rho_star, params)
    m_star = _momentum_star(state, ex, sol.pi, dt, grid)
    log.debug("t=%.6g newton its=%d residual=%.3e", state.time, sol.iterations, sol.residual)
    return HyperbolicResult(sol.pi, rho_new, m_star, sol.iterations, sol.residual)

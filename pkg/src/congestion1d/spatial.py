"""Finite-volume and finite-difference stencils on a :class:`Grid1D`.

Periodic grids wrap indices. Dirichlet grids use one ghost cell per side:
scalars are copied, velocity-like (``odd``) fields are negated, so the wall
velocity vanishes.
"""
import numpy as np

from .grid import Grid1D


def _check(grid: Grid1D, *fields):
    for f in fields:
        if np.shape(f) != (grid.n_cells,):
            raise ValueError(
                f"field of shape {np.shape(f)} does not match grid with {grid.n_cells} cells"
            )


def pad(f, grid: Grid1D, odd: bool = False) -> np.ndarray:
    """Return ``f`` extended by one ghost cell on each side."""
    f = np.asarray(f, dtype=float)
    out = np.empty(f.shape[0] + 2)
    out[1:-1] = f
    if grid.periodic:
        out[0], out[-1] = f[-1], f[0]
    else:
        sign = -1.0 if odd else 1.0
        out[0], out[-1] = sign * f[0], sign * f[-1]
    return out


def gradient_centered(f, grid: Grid1D, odd: bool = False) -> np.ndarray:
    """``(f[i+1] - f[i-1]) / (2 dx)``."""
    _check(grid, f)
    fp = pad(f, grid, odd)
    return (fp[2:] - fp[:-2]) / (2.0 * grid.dx)


def laplacian(f, grid: Grid1D, odd: bool = False) -> np.ndarray:
    """Compact 3-point Laplacian ``(f[i+1] - 2 f[i] + f[i-1]) / dx**2``."""
    _check(grid, f)
    fp = pad(f, grid, odd)
    return (fp[2:] - 2.0 * fp[1:-1] + fp[:-2]) / grid.dx**2


def rusanov_divergence(flux, advected, speed, grid: Grid1D, odd: bool = False) -> np.ndarray:
    """Conservative divergence with the local Lax-Friedrichs interface flux.

    ``F[i+1/2] = (q[i] + q[i+1]) / 2 - max(a[i], a[i+1]) (U[i+1] - U[i]) / 2``

    ``odd`` marks ``advected`` as velocity-like for Dirichlet ghosts; the
    flux then has the opposite parity.
    """
    _check(grid, flux, advected, speed)
    speed = np.asarray(speed, dtype=float)
    if np.any(speed < 0):
        raise ValueError("local wave speeds must be non-negative")
    q = pad(flux, grid, not odd)
    u = pad(advected, grid, odd)
    a = pad(speed, grid)
    face = 0.5 * (q[:-1] + q[1:]) - 0.5 * np.maximum(a[:-1], a[1:]) * (u[1:] - u[:-1])
    return (face[1:] - face[:-1]) / grid.dx


def upwind_advect(f, u, grid: Grid1D) -> np.ndarray:
    """First-order upwind approximation of ``u * df/dx`` using cell velocities."""
    _check(grid, f, u)
    u = np.asarray(u, dtype=float)
    fp = pad(f, grid)
    back = (fp[1:-1] - fp[:-2]) / grid.dx
    fwd = (fp[2:] - fp[1:-1]) / grid.dx
    return np.where(u > 0, u * back, np.where(u < 0, u * fwd, 0.0))

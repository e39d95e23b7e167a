"""Step 2 of the splitting: implicit viscous update of the velocity."""
import numpy as np

from .grid import Grid1D
from .linalg import TridiagonalSystem, solve_cyclic_tridiagonal


def solve_diffusion(rho_new, u_star, mu: float, dt: float, grid: Grid1D) -> np.ndarray:
    """Backward-Euler step of ``rho du/dt = 2 mu u_xx``.

    Solves ``(rho I - 2 mu dt L) u_new = rho u_star``, which is a strictly
    diagonally dominant M-matrix for ``rho > 0``. The viscous term carries the
    dissipative sign. ``mu == 0`` returns ``u_star`` unchanged.
    """
    rho_new = np.asarray(rho_new, dtype=float)
    u_star = np.asarray(u_star, dtype=float)
    if mu < 0:
        raise ValueError("viscosity must be non-negative")
    if np.any(rho_new <= 0):
        raise ValueError("diffusion step needs a strictly positive density")
    if mu == 0:
        return u_star.copy()
    k = 2.0 * mu * dt / grid.dx**2
    n = grid.n_cells
    diag = rho_new + 2.0 * k
    lower = np.full(n, -k)
    upper = np.full(n, -k)
    if not grid.periodic:
        # reflected ghost velocity: L u[0] = (u[1] - 3 u[0]) / dx**2
        diag[0] += k
        diag[-1] += k
        lower[0] = upper[-1] = 0.0
    sys = TridiagonalSystem(lower, diag, upper, periodic=grid.periodic)
    return solve_cyclic_tridiagonal(sys, rho_new * u_star)

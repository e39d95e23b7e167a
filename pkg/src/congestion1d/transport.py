"""Step 3 of the splitting: upwind transport of the congestion density."""
import numpy as np

from .errors import CflViolation
from .grid import Grid1D
from .spatial import upwind_advect


def transport_rho_star(rho_star, u_new, dt: float, grid: Grid1D) -> np.ndarray:
    """Explicit upwind step of ``d(rho*)/dt + u d(rho*)/dx = 0``.

    Requires ``max|u| dt / dx <= 1``; within that bound the update is a convex
    combination of neighbouring values, so no new extrema appear.
    """
    u_new = np.asarray(u_new, dtype=float)
    rho_star = np.asarray(rho_star, dtype=float)
    speed = float(np.max(np.abs(u_new)))
    bound = grid.dx / dt
    if speed > bound * (1.0 + 1e-12):
        raise CflViolation(
            f"transport CFL violated: max|u| = {speed:.6g} > dx/dt = {bound:.6g}", speed, bound
        )
    return rho_star - dt * upwind_advect(rho_star, u_new, grid)

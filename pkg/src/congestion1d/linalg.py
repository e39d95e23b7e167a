"""Direct tridiagonal solves (plain and cyclic) and the sparse Newton Jacobian."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import Grid1D


class SingularSystemError(np.linalg.LinAlgError):
    """The tridiagonal system is singular or not diagonally dominant."""


@dataclass
class TridiagonalSystem:
    """Row ``i`` reads ``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]``.

    With ``periodic`` set, ``lower[0]`` is the top-right corner (coefficient of
    ``x[n-1]`` in row 0) and ``upper[n-1]`` the bottom-left corner; otherwise
    both are ignored and should be zero.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    periodic: bool = True

    def __post_init__(self):
        self.lower = np.ascontiguousarray(self.lower, dtype=float)
        self.diag = np.ascontiguousarray(self.diag, dtype=float)
        self.upper = np.ascontiguousarray(self.upper, dtype=float)
        n = self.diag.shape[0]
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("lower, diag and upper must all have length n")
        if n < 3:
            raise ValueError("need at least 3 unknowns")
        if not (
            np.all(np.isfinite(self.lower))
            and np.all(np.isfinite(self.diag))
            and np.all(np.isfinite(self.upper))
        ):
            raise ValueError("non-finite matrix entries")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def _offdiag(self):
        lo, up = self.lower.copy(), self.upper.copy()
        if not self.periodic:
            lo[0] = up[-1] = 0.0
        return lo, up

    def matvec(self, x) -> np.ndarray:
        lo, up = self._offdiag()
        return lo * np.roll(x, 1) + self.diag * x + up * np.roll(x, -1)

    def to_dense(self) -> np.ndarray:
        lo, up = self._offdiag()
        n = self.n
        a = np.diag(self.diag)
        idx = np.arange(n)
        a[idx, (idx - 1) % n] += lo
        a[idx, (idx + 1) % n] += up
        return a

    def dominance_margin(self) -> np.ndarray:
        lo, up = self._offdiag()
        return np.abs(self.diag) - np.abs(lo) - np.abs(up)

    def norm_inf(self) -> float:
        lo, up = self._offdiag()
        return float(np.max(np.abs(lo) + np.abs(self.diag) + np.abs(up)))


def _thomas(lower, diag, upper, rhs):
    try:
        return kernels.thomas_solve(lower, diag, upper, rhs)
    except ZeroDivisionError as exc:
        raise SingularSystemError(str(exc)) from None


def solve_cyclic_tridiagonal(sys: TridiagonalSystem, rhs) -> np.ndarray:
    """Solve ``A x = rhs``.

    Periodic systems are reduced to a plain tridiagonal one by a rank-one
    (Sherman-Morrison) correction of the corners; both right-hand sides go
    through a single Thomas sweep.
    """
    rhs = np.ascontiguousarray(rhs, dtype=float)
    if rhs.shape != (sys.n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({sys.n},)")
    margin = sys.dominance_margin()
    scale = np.abs(sys.diag)
    if np.any(margin < -1e-14 * scale):
        row = int(np.argmin(margin))
        raise SingularSystemError(f"system is not diagonally dominant in row {row}")

    if not sys.periodic:
        x = _thomas(sys.lower, sys.diag, sys.upper, rhs)
    else:
        n = sys.n
        top_right, bottom_left = sys.lower[0], sys.upper[-1]
        g = -sys.diag[0]
        b = sys.diag.copy()
        b[0] -= g
        b[-1] -= bottom_left * top_right / g
        u = np.zeros(n)
        u[0], u[-1] = g, bottom_left
        both = _thomas(sys.lower, b, sys.upper, np.column_stack([rhs, u]))
        y, z = both[:, 0], both[:, 1]
        vz = z[0] + top_right / g * z[-1]
        vy = y[0] + top_right / g * y[-1]
        denom = 1.0 + vz
        if abs(denom) <= 1e-12 * max(1.0, abs(vz)):
            raise SingularSystemError("cyclic system is singular")
        x = y - (vy / denom) * z

    if not np.all(np.isfinite(x)):
        raise SingularSystemError("solution is not finite")
    resid = np.max(np.abs(sys.matvec(x) - rhs))
    bound = 1e-12 * (sys.norm_inf() * np.max(np.abs(x)) + np.max(np.abs(rhs)))
    if resid > bound:
        raise SingularSystemError(f"residual {resid:.3e} exceeds {bound:.3e}; system is near-singular")
    return x


def assemble_newton_jacobian(
    pi,
    cell_density,
    coupling: float,
    grid: Grid1D,
    fd_step: float = 1e-7,
    pi_floor: float = 1e-12,
) -> TridiagonalSystem:
    """Jacobian of ``F(pi) = cell_density(pi) - coupling * L pi - rhs``.

    ``cell_density`` maps pressures to densities cell by cell, so one
    vectorised forward difference with step ``fd_step * max(|pi_j|, pi_floor)``
    gives the whole diagonal of its Jacobian. The Laplacian part is exact.
    """
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    pi = np.asarray(pi, dtype=float)
    if np.any(pi < 0):
        raise ValueError("pressure iterate must be non-negative")
    probe = pi + fd_step * np.maximum(np.abs(pi), pi_floor)
    h = probe - pi
    base = cell_density(pi)
    shifted = cell_density(probe)
    if not (np.all(np.isfinite(base)) and np.all(np.isfinite(shifted))):
        raise FloatingPointError("non-finite residual evaluation in Jacobian assembly")
    local = (shifted - base) / h

    c = coupling / grid.dx**2
    n = grid.n_cells
    lower = np.full(n, -c)
    upper = np.full(n, -c)
    diag = local + 2.0 * c
    if not grid.periodic:
        # Neumann ghosts for a scalar pressure: L pi[0] = (pi[1] - pi[0]) / dx**2
        diag[0] -= c
        diag[-1] -= c
        lower[0] = upper[-1] = 0.0
    sys = TridiagonalSystem(lower, diag, upper, periodic=grid.periodic)
    if np.any(sys.dominance_margin() <= 0):
        raise SingularSystemError("Newton Jacobian is not strictly diagonally dominant")
    return sys

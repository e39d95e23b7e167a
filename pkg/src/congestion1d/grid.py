"""Uniform 1D cell-centred mesh and the discrete flow state."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET_ZERO_VELOCITY = "dirichlet"


class CorruptStateError(ValueError):
    """A flow state violates its invariants."""


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    dx: float
    length: float
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if self.n_cells < 4:
            raise ValueError(f"need at least 4 cells, got {self.n_cells}")
        if not self.length > 0:
            raise ValueError(f"domain length must be positive, got {self.length}")
        if abs(self.dx * self.n_cells - self.length) > 1e-14 * self.length:
            raise ValueError("dx * n_cells must equal the domain length")

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx


def new_uniform_grid(length: float, n_cells: int, boundary=Boundary.PERIODIC) -> Grid1D:
    """Build a uniform grid with ``dx = length / n_cells``."""
    if int(n_cells) != n_cells or n_cells < 4:
        raise ValueError(f"n_cells must be an integer >= 4, got {n_cells}")
    if not length > 0:
        raise ValueError(f"length must be positive, got {length}")
    return Grid1D(int(n_cells), length / n_cells, float(length), Boundary(boundary))


@dataclass
class FlowState:
    """Conserved variables per cell plus the transported maximal density.

    ``pi`` holds the singular pressure from the last hyperbolic solve (used as
    the next Newton guess); it is ``None`` for a freshly initialised state.
    """

    rho: np.ndarray
    momentum: np.ndarray
    rho_star: np.ndarray
    time: float = 0.0
    pi: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.momentum = np.asarray(self.momentum, dtype=float)
        self.rho_star = np.asarray(self.rho_star, dtype=float)

    @property
    def n_cells(self) -> int:
        return self.rho.shape[0]

    def copy(self) -> FlowState:
        return replace(
            self,
            rho=self.rho.copy(),
            momentum=self.momentum.copy(),
            rho_star=self.rho_star.copy(),
            pi=None if self.pi is None else self.pi.copy(),
        )

    def validate(self, strict_constraint: bool = True) -> None:
        """Raise CorruptStateError unless every invariant holds."""
        n = self.rho.shape[0]
        for name in ("rho", "momentum", "rho_star"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise CorruptStateError(f"{name} has shape {arr.shape}, expected ({n},)")
            if not np.all(np.isfinite(arr)):
                raise CorruptStateError(f"{name} has non-finite entries")
        if np.any(self.rho < 0):
            raise CorruptStateError("negative density")
        if np.any(self.rho_star <= 0):
            raise CorruptStateError("non-positive congestion density")
        if strict_constraint and np.any(self.rho >= self.rho_star):
            i = int(np.argmax(self.rho / self.rho_star))
            raise CorruptStateError(f"congestion constraint violated in cell {i}")


def velocity(state: FlowState, floor: float = 1e-10) -> np.ndarray:
    """Per-cell velocity ``m / max(rho, floor)``; exactly zero where ``m == 0``."""
    if not floor > 0:
        raise ValueError("velocity floor must be positive")
    return state.momentum / np.maximum(state.rho, floor)


def density_fraction(state: FlowState) -> np.ndarray:
    """Per-cell density fraction ``Z = rho / rho_star``."""
    if np.any(state.rho_star <= 0):
        raise CorruptStateError("non-positive congestion density")
    return state.rho / state.rho_star

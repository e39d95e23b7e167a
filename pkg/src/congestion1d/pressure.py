"""Background and singular pressure laws, the density inverse, and the
energy integrand used by the diagnostics.

All functions accept scalars or arrays of density fractions ``Z`` and return
the same shape (0-d inputs give Python floats).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

# Largest double strictly below one; the inverse never returns more.
Z_MAX = float(np.nextafter(1.0, 0.0))
_INVERSION_CAP = 1.0 - 1e-15


@dataclass(frozen=True)
class PressureParams:
    """Parameters of ``pi_eps(Z) = eps Z^alpha / (1-Z)^beta`` and ``p(Z) = Z^gamma``."""

    epsilon: float = 1e-4
    alpha: float = 2.0
    beta: float = 2.0
    gamma: float = 2.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")

    @property
    def quadratic(self) -> bool:
        return self.alpha == 2.0 and self.beta == 2.0

    def with_epsilon(self, epsilon: float) -> PressureParams:
        return PressureParams(epsilon, self.alpha, self.beta, self.gamma)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _fraction(z, upper_open: bool) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(np.isnan(z)):
        raise ValueError("density fraction must be >= 0")
    if upper_open and np.any(z >= 1):
        raise ValueError("density fraction must be < 1 (pressure is singular at Z = 1)")
    if not upper_open and np.any(z > 1):
        raise ValueError("density fraction must be <= 1")
    return z


def background_pressure(z, params: PressureParams):
    """``p(Z) = Z**gamma`` on ``[0, 1]``."""
    z = _fraction(z, upper_open=False)
    return _out(z**params.gamma)


def background_pressure_derivative(z, params: PressureParams):
    z = _fraction(z, upper_open=False)
    return _out(params.gamma * z ** (params.gamma - 1.0))


def singular_pressure(z, params: PressureParams):
    """``pi_eps(Z) = eps * Z**alpha / (1 - Z)**beta`` on ``[0, 1)``."""
    z = _fraction(z, upper_open=True)
    return _out(params.epsilon * (z**params.alpha / (1.0 - z) ** params.beta))


def singular_pressure_derivative(z, params: PressureParams):
    z = _fraction(z, upper_open=True)
    a, b = params.alpha, params.beta
    if a < 1.0 and np.any(z == 0):
        raise ValueError("derivative is unbounded at Z = 0 for alpha < 1")
    za1 = z ** (a - 1.0)
    num = a * za1 * (1.0 - z) + b * z**a
    return _out(params.epsilon * num / (1.0 - z) ** (b + 1.0))


def invert_singular_pressure(pi_value, params: PressureParams):
    """Density fraction ``Z`` with ``singular_pressure(Z) == pi_value``.

    Uses ``Z = s / (1 + s)``, ``s = sqrt(pi / eps)`` for ``alpha = beta = 2``
    and a bracketed Newton iteration otherwise. Values below
    ``singular_pressure(0)`` (only possible for ``alpha = 0``) map to 0.
    """
    pv = np.asarray(pi_value, dtype=float)
    if np.any(pv < 0) or np.any(np.isnan(pv)):
        raise ValueError("singular pressure must be >= 0")
    if params.quadratic:
        s = np.sqrt(pv / params.epsilon)
        with np.errstate(invalid="ignore"):
            z = np.where(np.isinf(s), Z_MAX, s / (1.0 + s))
        z = np.minimum(z, Z_MAX)
    else:
        flat = np.ascontiguousarray(pv.ravel())
        z = kernels.invert_singular(
            flat, params.epsilon, params.alpha, params.beta, _INVERSION_CAP
        ).reshape(pv.shape)
    return _out(z)


def _adaptive_simpson(f, a, b, tol, depth=60):
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + recurse(
            m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
        )

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)


def energy_density_gamma(z, params: PressureParams):
    """Energy integrand ``Gamma(Z) = int_0^Z (pi(s) + p(s)) / s**2 ds``.

    The background part integrates in closed form for any ``gamma > 1``. The
    singular part is closed form for ``alpha = beta = 2`` and adaptive Simpson
    otherwise; ``alpha < 2`` is rejected (integrand unbounded at 0).
    """
    if params.alpha < 2.0:
        raise ValueError("energy integrand needs alpha >= 2 to be bounded at Z = 0")
    z = _fraction(z, upper_open=True)
    g = params.gamma
    background = z ** (g - 1.0) / (g - 1.0)
    if params.quadratic:
        singular = params.epsilon * z / (1.0 - z)
    else:
        a, b, eps = params.alpha, params.beta, params.epsilon

        def integrand(s):
            return eps * s ** (a - 2.0) / (1.0 - s) ** b

        flat = [
            _adaptive_simpson(integrand, 0.0, zi, 1e-13 * max(1.0, integrand(zi) * zi))
            if zi > 0
            else 0.0
            for zi in np.atleast_1d(z).ravel()
        ]
        singular = np.asarray(flat).reshape(z.shape)
    return _out(background + singular)

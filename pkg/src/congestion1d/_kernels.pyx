# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: Thomas elimination and cell-wise pressure inversion.

Mirrors ``_fallback.py`` function for function; the selection happens in
``kernels.py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, log1p, fabs, pow

cnp.import_array()


def thomas_solve(const double[::1] lower, const double[::1] diag,
                 const double[::1] upper, rhs):
    """Solve a plain tridiagonal system for one or several right-hand sides.

    ``lower[0]`` and ``upper[n-1]`` are ignored. ``rhs`` has shape ``(n,)`` or
    ``(n, k)``. Raises ZeroDivisionError on a vanishing pivot.
    """
    cdef cnp.ndarray[double, ndim=2, mode="c"] x
    squeeze = np.ndim(rhs) == 1
    x = np.array(np.asarray(rhs, dtype=np.float64).reshape(len(diag), -1), order="C", copy=True)
    cdef double[:, ::1] xv = x
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t k = xv.shape[1]
    cdef Py_ssize_t i, j
    cdef double[::1] cp = np.empty(n)
    cdef double piv, m

    piv = diag[0]
    if piv == 0.0:
        raise ZeroDivisionError("zero pivot in row 0")
    cp[0] = upper[0] / piv if n > 1 else 0.0
    for j in range(k):
        xv[0, j] /= piv
    for i in range(1, n):
        piv = diag[i] - lower[i] * cp[i - 1]
        if piv == 0.0:
            raise ZeroDivisionError(f"zero pivot in row {i}")
        cp[i] = upper[i] / piv if i < n - 1 else 0.0
        m = lower[i]
        for j in range(k):
            xv[i, j] = (xv[i, j] - m * xv[i - 1, j]) / piv
    for i in range(n - 2, -1, -1):
        m = cp[i]
        for j in range(k):
            xv[i, j] -= m * xv[i + 1, j]
    if squeeze:
        return x[:, 0]
    return x


cdef inline double _root(double target, double eps, double alpha, double beta,
                         double zmax, double tol, int maxiter):
    # Newton on h(Z) = a ln Z - b ln(1 - Z) - ln(target / eps), bracketed
    cdef double lo = 0.0, hi = zmax, z, h, dh, znew, logt
    cdef int it
    if alpha == 0.0:
        if target <= eps:
            return 0.0
    elif target <= 0.0:
        return 0.0
    logt = log(target / eps)
    if target > eps:
        z = 1.0 - pow(eps / target, 1.0 / beta)
    elif alpha > 0.0:
        z = pow(target / eps, 1.0 / alpha)
    else:
        z = 0.5
    if not (z > lo and z < hi):
        z = 0.5 * (lo + hi)
    for it in range(maxiter):
        h = -beta * log1p(-z) - logt
        dh = beta / (1.0 - z)
        if alpha > 0.0:
            h += alpha * log(z)
            dh += alpha / z
        if h == 0.0:
            return z
        if h < 0.0:
            lo = z
        else:
            hi = z
        znew = z - h / dh
        if not (znew > lo and znew < hi):
            znew = 0.5 * (lo + hi)
        if fabs(znew - z) <= tol or hi - lo <= tol:
            return znew
        z = znew
    return z


def invert_singular(const double[::1] target, double eps, double alpha,
                    double beta, double zmax):
    """Cell-wise inverse of ``eps * Z**alpha / (1 - Z)**beta`` on ``[0, zmax]``."""
    cdef Py_ssize_t n = target.shape[0], i
    out = np.empty(n)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = _root(target[i], eps, alpha, beta, zmax, 1e-16, 200)
    return out

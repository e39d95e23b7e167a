"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def thomas_solve(lower, diag, upper, rhs):
    """Solve a plain tridiagonal system for one or several right-hand sides.

    ``lower[0]`` and ``upper[n-1]`` are ignored. ``rhs`` has shape ``(n,)`` or
    ``(n, k)``. Raises ZeroDivisionError on a vanishing pivot.
    """
    a = np.asarray(lower, dtype=float).tolist()
    b = np.asarray(diag, dtype=float).tolist()
    c = np.asarray(upper, dtype=float).tolist()
    d = np.asarray(rhs, dtype=float)
    squeeze = d.ndim == 1
    cols = d.reshape(len(b), -1).T.tolist()
    n = len(b)

    cp = [0.0] * n
    piv = [0.0] * n
    piv[0] = b[0]
    if piv[0] == 0.0:
        raise ZeroDivisionError("zero pivot in row 0")
    cp[0] = c[0] / piv[0] if n > 1 else 0.0
    for i in range(1, n):
        piv[i] = b[i] - a[i] * cp[i - 1]
        if piv[i] == 0.0:
            raise ZeroDivisionError(f"zero pivot in row {i}")
        cp[i] = c[i] / piv[i] if i < n - 1 else 0.0

    out = []
    for x in cols:
        x[0] = x[0] / piv[0]
        for i in range(1, n):
            x[i] = (x[i] - a[i] * x[i - 1]) / piv[i]
        for i in range(n - 2, -1, -1):
            x[i] -= cp[i] * x[i + 1]
        out.append(x)
    res = np.array(out).T
    return res[:, 0].copy() if squeeze else np.ascontiguousarray(res)


def invert_singular(target, eps, alpha, beta, zmax):
    """Cell-wise inverse of ``eps * Z**alpha / (1 - Z)**beta`` on ``[0, zmax]``.

    Same bracketed Newton iteration as the compiled kernel, advanced on all
    unconverged cells at once.
    """
    t = np.asarray(target, dtype=float)
    z = np.zeros_like(t)
    if alpha == 0.0:
        active = t > eps
    else:
        active = t > 0.0
    idx = np.flatnonzero(active)
    if idx.size == 0:
        return z
    tt = t[idx]
    logt = np.log(tt / eps)
    lo = np.zeros_like(tt)
    hi = np.full_like(tt, zmax)
    with np.errstate(divide="ignore", over="ignore"):
        guess = np.where(
            tt > eps,
            1.0 - (eps / tt) ** (1.0 / beta),
            (tt / eps) ** (1.0 / alpha) if alpha > 0 else 0.5,
        )
    bad = ~((guess > lo) & (guess < hi))
    guess[bad] = 0.5 * (lo[bad] + hi[bad])
    zz = guess
    done = np.zeros(tt.shape, dtype=bool)
    result = zz.copy()
    for _ in range(200):
        h = -beta * np.log1p(-zz) - logt
        dh = beta / (1.0 - zz)
        if alpha > 0.0:
            h = h + alpha * np.log(zz)
            dh = dh + alpha / zz
        exact = (h == 0.0) & ~done
        result[exact] = zz[exact]
        done |= exact
        lo = np.where(h < 0.0, zz, lo)
        hi = np.where(h > 0.0, zz, hi)
        znew = zz - h / dh
        out = ~((znew > lo) & (znew < hi))
        znew[out] = 0.5 * (lo[out] + hi[out])
        conv = ((np.abs(znew - zz) <= 1e-16) | (hi - lo <= 1e-16)) & ~done
        result[conv] = znew[conv]
        done |= conv
        if done.all():
            break
        zz = np.where(done, zz, znew)
    result[~done] = zz[~done]
    z[idx] = result
    return z

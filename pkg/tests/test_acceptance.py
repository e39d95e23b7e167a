"""Acceptance criteria 1-13, one PASS/FAIL line each in the terminal summary.

Long runs are cached per (case, epsilon) and shared between criteria. Two
criteria cannot hold for the published setup; they are implemented as
stated and marked as strict expected failures, with a supplementary check
of the property they were meant to capture.
"""
import functools
import itertools
import time

import numpy as np
import pytest

from congestion1d import pressure as pl
from congestion1d.diagnostics import reflection_error
from congestion1d.diffusion import solve_diffusion
from congestion1d.driver import RunConfig, RunStatus, standard_config, run, step
from congestion1d.grid import FlowState, new_uniform_grid
from congestion1d.hyperbolic import NewtonConfig, newton_solve_pi
from congestion1d.linalg import TridiagonalSystem, solve_cyclic_tridiagonal
from congestion1d.scenarios import STANDARD_CASES, Scenario, get_scenario, initialize
from congestion1d.spatial import laplacian
from congestion1d.transport import transport_rho_star

from .oracles import dense_cyclic, gamma_quad, picard_pressure, random_cyclic_system, singular_pressure_mp

EPSILONS = (1e-2, 1e-4, 1e-6)
CASE4_DENSE_SNAPS = tuple(np.round(np.arange(0.0, 0.5001, 0.01), 10))


@functools.cache
def standard_run(case, eps=1e-4):
    """Run at the standard settings; returns (result, wall seconds)."""
    extra = {}
    if case == "case4" and eps == 1e-4:
        extra["snapshot_times"] = CASE4_DENSE_SNAPS
    cfg = standard_config(case, params=pl.PressureParams(eps, 2, 2, 2), **extra)
    t0 = time.perf_counter()
    res = run(cfg)
    return res, time.perf_counter() - t0


def as_state(snap):
    return FlowState(snap.rho, snap.rho * snap.u, snap.rho_star, time=snap.time)


# 1 ---------------------------------------------------------------------------
def test_c01_mass_conservation(record_criterion):
    lines, ok = [], True
    for case in STANDARD_CASES:
        res, secs = standard_run(case)
        m = np.array([d.total_mass for d in res.diagnostics])
        drift = np.max(np.abs(m - m[0])) / m[0]
        good = res.status is RunStatus.COMPLETED and drift <= 1e-10 and secs <= 60
        ok &= good
        lines.append(f"{case} drift={drift:.1e} t={res.diagnostics[-1].time:.2f} {secs:.1f}s")
    record_criterion("1 mass conservation", ok, "; ".join(lines))
    assert ok


# 2 ---------------------------------------------------------------------------
def test_c02_constraint(record_criterion):
    worst, ok = 0.0, True
    for case, eps in itertools.product(STANDARD_CASES, EPSILONS):
        res, _ = standard_run(case, eps)
        z = max(d.max_Z for d in res.diagnostics)
        worst = max(worst, z)
        ok &= res.status is RunStatus.COMPLETED and z < 1.0
    record_criterion("2 constraint max Z < 1", ok, f"12 runs, largest max Z = {worst!r}")
    assert ok


# 3 ---------------------------------------------------------------------------
def test_c03_epsilon_sweep(record_criterion):
    runs = [standard_run("case1", e)[0] for e in EPSILONS]
    completed = all(r.status is RunStatus.COMPLETED for r in runs)
    ordering = {}
    for t in (0.05, 0.1):
        z = [float(np.max(r.snapshot_at(t).Z)) for r in runs]
        ordering[t] = z
    ordered = all(z[2] > z[1] > z[0] for z in ordering.values())
    medians = [float(np.median(r.newton_iterations)) for r in runs]
    spread = max(medians) / min(medians)
    ok = completed and ordered and spread <= 2.0
    detail = (
        f"maxZ(t=.05)={['%.4f' % v for v in ordering[0.05]]} maxZ(t=.1)={['%.4f' % v for v in ordering[0.1]]} "
        f"Newton medians={medians}"
    )
    record_criterion("3 epsilon sweep ordering", ok, detail)
    assert ok


# 4 ---------------------------------------------------------------------------
def test_c04_constant_congestion(record_criterion):
    res, _ = standard_run("case1")
    err = max(float(np.max(np.abs(s.rho_star - 1.0))) for s in res.snapshots)
    err = max(err, float(np.max(np.abs(res.final_state.rho_star - 1.0))))
    ok = res.final_state.time == pytest.approx(0.1) and err <= 1e-14
    record_criterion("4 rho* stays 1 in case 1", ok, f"sup|rho*-1| = {err:.1e}")
    assert ok


# 5 ---------------------------------------------------------------------------
def test_c05_pressure_laws(record_criterion):
    grid27 = [
        pl.PressureParams(e, a, b, 2) for e, a, b in itertools.product(EPSILONS, [0, 1, 2], [1, 2, 3])
    ]
    z = np.linspace(0.0, 1.0 - 1e-8, 10_000)
    rt = max(float(np.max(np.abs(pl.invert_singular_pressure(pl.singular_pressure(z, p), p) - z))) for p in grid27)

    zi = np.linspace(0.01, 0.99, 99)
    h = 1e-6 * np.minimum(zi, 1 - zi)
    fd_err = 0.0
    for p in grid27:
        fd = (pl.singular_pressure(zi + h, p) - pl.singular_pressure(zi - h, p)) / (2 * h)
        fd_err = max(fd_err, float(np.max(np.abs(pl.singular_pressure_derivative(zi, p) / fd - 1))))

    p2 = pl.PressureParams(1e-4, 2, 2, 2)
    g_err = max(abs(pl.energy_density_gamma(v, p2) - gamma_quad(v, 1e-4, 2, 2, 2)) for v in np.linspace(0.01, 0.99, 50))

    # pressure values themselves against extended precision
    pv = max(
        abs(float(pl.singular_pressure(v, p)) / float(singular_pressure_mp(v, p.epsilon, p.alpha, p.beta)) - 1)
        for p in grid27
        for v in (0.1, 0.5, 0.9, 0.999)
    )
    ok = rt <= 1e-12 and fd_err <= 1e-6 and g_err <= 1e-10 and pv <= 1e-13
    record_criterion(
        "5 pressure-law suite", ok, f"round trip {rt:.1e}, FD rel {fd_err:.1e}, Gamma {g_err:.1e}"
    )
    assert ok


# 6 ---------------------------------------------------------------------------
def test_c06_newton_vs_picard(record_criterion):
    params = pl.PressureParams(1e-4, 2, 2, 2)
    g = new_uniform_grid(1.0, 8)
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        dt = 10 ** rng.uniform(-3, -1)
        rs = rng.uniform(0.5, 1.5, 8)
        zt = rng.uniform(0.05, 0.95, 8)
        phi = rs * zt - dt**2 * laplacian(pl.singular_pressure(zt, params), g)
        sol = newton_solve_pi(phi, rs, params, dt, g, NewtonConfig(tolerance=1e-13))
        ref = picard_pressure(phi, rs, params.epsilon, dt, g.dx)
        worst = max(worst, float(np.max(np.abs(sol.pi - ref))))
    ok = worst <= 1e-9
    record_criterion("6 Newton vs Picard oracle", ok, f"100 instances, max |dpi| = {worst:.1e}")
    assert ok


# 7 ---------------------------------------------------------------------------
def test_c07_cyclic_solver(record_criterion):
    rng = np.random.default_rng(7)
    sizes = np.unique(np.round(np.exp(rng.uniform(np.log(4), np.log(2048), 1000))).astype(int), return_counts=True)
    worst = 0.0
    for n, count in zip(*sizes):
        for _ in range(count):
            lo, d, up = random_cyclic_system(rng, n)
            b = rng.normal(size=n)
            x = solve_cyclic_tridiagonal(TridiagonalSystem(lo, d, up, periodic=True), b)
            ref = np.linalg.solve(dense_cyclic(lo, d, up), b)
            worst = max(worst, float(np.max(np.abs(x - ref)) / np.max(np.abs(ref))))
    ok = worst <= 1e-12
    record_criterion("7 cyclic tridiagonal vs dense", ok, f"1000 systems n=4..2048, max rel err = {worst:.1e}")
    assert ok


# 8 ---------------------------------------------------------------------------
def test_c08_diffusion(record_criterion):
    g = new_uniform_grid(1.0, 64)
    mu, dt = 1e-2, 1e-3
    u = np.sin(2 * np.pi * g.centers)
    exact = u / (1 + 2 * mu * dt * (2 / g.dx**2) * (1 - np.cos(2 * np.pi * g.dx)))
    eig = float(np.max(np.abs(solve_diffusion(np.ones(64), u, mu, dt, g) - exact)))

    rng = np.random.default_rng(8)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(4, 200))
        gr = new_uniform_grid(1.0, n)
        rho = rng.uniform(0.01, 1.0, n)
        us = rng.uniform(-2, 2, n)
        out = solve_diffusion(rho, us, 10 ** rng.uniform(-5, 0), 10 ** rng.uniform(-5, -2), gr)
        violations += not (np.min(us) - 1e-12 <= np.min(out) and np.max(out) <= np.max(us) + 1e-12)
    ok = eig <= 1e-12 and violations == 0
    record_criterion("8 diffusion eigenmode + max principle", ok, f"eigenmode err {eig:.1e}, {violations}/1000 violations")
    assert ok


# 9 ---------------------------------------------------------------------------
def test_c09_upwind(record_criterion):
    # dyadic dx and speeds make the Courant number exactly one; the update
    # rho - (rho - rho_up) then reproduces the shift up to one rounding
    g = new_uniform_grid(1.0, 128)
    rng = np.random.default_rng(9)
    rs = rng.uniform(0.3, 1.2, 128)
    shift_err = max(
        float(np.max(np.abs(transport_rho_star(rs, np.full(128, c), g.dx / abs(c), g) - np.roll(rs, int(np.sign(c))))))
        for c in (0.5, -0.5, 4.0, -8.0)
    )
    shift_ok = shift_err <= 2 * np.finfo(float).eps * np.max(rs)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(4, 300))
        gr = new_uniform_grid(1.0, n)
        r = rng.uniform(0.1, 2.0, n)
        u = rng.uniform(-1, 1, n) * 10 ** rng.uniform(-3, 1)
        dt = rng.uniform(0.0, 1.0) * gr.dx / np.max(np.abs(u))
        out = transport_rho_star(r, u, dt, gr)
        violations += not (np.min(r) - 1e-14 <= np.min(out) and np.max(out) <= np.max(r) + 1e-14)
    ok = shift_ok and violations == 0
    record_criterion("9 upwind exactness + max principle", ok, f"unit-CFL shift err {shift_err:.1e}, {violations}/1000 violations")
    assert ok


# 10 --------------------------------------------------------------------------
def _symmetric_case1():
    return Scenario(
        "custom",
        rho0=lambda x: np.full_like(x, 0.7),
        u0=lambda x: np.where((x > 0.1) & (x < 0.6), 0.8, -0.8),
        rho_star0=lambda x: np.ones_like(x),
    )


@pytest.mark.xfail(strict=True, reason="case 1 data has arcs of length 0.4 and 0.6: no mirror symmetry exists")
def test_c10_reflection_symmetry(record_criterion):
    res, _ = standard_run("case1")
    g = res.config.grid
    errs = [reflection_error(as_state(s), g, 0.6) for s in res.snapshots]
    ok = max(errs) <= 1e-8
    record_criterion(
        "10 case 1 reflection symmetry",
        ok,
        f"defect about x=0.6: {['%.3g' % e for e in errs]} (initial data is not symmetric; "
        "see test_c10_symmetric_variant)",
    )
    assert ok


def test_c10_symmetric_variant():
    # same dynamics with the jump moved to 0.1, which makes x -> 1.2 - x a symmetry
    cfg = standard_config(_symmetric_case1())
    res = run(cfg)
    assert res.status is RunStatus.COMPLETED
    errs = [reflection_error(as_state(s), cfg.grid, 0.6) for s in res.snapshots]
    assert max(errs) <= 1e-8


# 11 --------------------------------------------------------------------------
def _restrict(f):
    return 0.5 * (f[0::2] + f[1::2])


def test_c11_self_convergence(record_criterion):
    rhos = {}
    for n in (250, 500, 1000):
        cfg = standard_config("case1", grid=new_uniform_grid(1.0, n), dt=0.1 / n, t_end=0.05)
        res = run(cfg)
        assert res.status is RunStatus.COMPLETED
        rhos[n] = res.snapshot_at(0.05).rho
    d1 = np.sum(np.abs(rhos[250] - _restrict(rhos[500]))) / 250
    d2 = np.sum(np.abs(rhos[500] - _restrict(rhos[1000]))) / 500
    ratio = d2 / d1
    ok = d2 < d1 and ratio <= 0.75
    record_criterion("11 self-convergence", ok, f"L1 diffs {d1:.3e}, {d2:.3e}, ratio {ratio:.3f}")
    assert ok


# 12 --------------------------------------------------------------------------
def test_c12_stationarity(record_criterion):
    sc = Scenario("custom", rho0=lambda x: np.full_like(x, 0.7), u0=np.zeros_like, rho_star0=np.ones_like)
    cfg = RunConfig(sc, new_uniform_grid(1.0, 1000), dt=1e-4, t_end=0.01)
    s0 = initialize(sc, cfg.grid)
    s = s0
    for k in range(1, 101):
        s, _ = step(s, cfg, k)
    errs = (
        float(np.max(np.abs(s.rho - s0.rho))),
        float(np.max(np.abs(s.momentum))),
        float(np.max(np.abs(s.rho_star - s0.rho_star))),
    )
    ok = max(errs) <= 1e-12
    record_criterion("12 stationary fixed point", ok, "100 steps, field errors (rho, m, rho*) = " + ", ".join(f"{e:.1e}" for e in errs))
    assert ok


# 13 --------------------------------------------------------------------------
@pytest.mark.qualitative
@pytest.mark.xfail(strict=True, reason="no cell has Z > 0.95 at both t = 0.25 and t = 0.5 in case 4")
def test_c13_congestion_freeze(record_criterion):
    res, _ = standard_run("case4")
    a, b = res.snapshot_at(0.25), res.snapshot_at(0.5)
    mask = (a.Z > 0.95) & (b.Z > 0.95)
    change = float(np.max(np.abs(b.rho_star - a.rho_star)[mask])) if mask.any() else float("nan")
    ok = bool(mask.any()) and change <= 0.05
    record_criterion(
        "13 congestion freeze (qualitative)",
        ok,
        f"cells congested at both times: {int(mask.sum())} (max Z {a.Z.max():.3f} at 0.25, {b.Z.max():.3f} at 0.5); "
        "see test_c13_windowed_freeze",
    )
    assert ok


@pytest.mark.qualitative
def test_c13_windowed_freeze():
    # the same statement over 0.01-long windows between 0.25 and 0.5
    res, _ = standard_run("case4")
    frozen, free = 0.0, 0.0
    hits = 0
    times = [t for t in CASE4_DENSE_SNAPS if 0.25 - 1e-9 <= t <= 0.49 + 1e-9]
    for t in times:
        a, b = res.snapshot_at(t), res.snapshot_at(t + 0.01)
        mask = (a.Z > 0.95) & (b.Z > 0.95)
        d = np.abs(b.rho_star - a.rho_star)
        if mask.any():
            hits += 1
            frozen = max(frozen, float(d[mask].max()))
        free = max(free, float(d[~mask].max()))
    assert hits > 0
    assert frozen <= 0.05
    assert free > frozen

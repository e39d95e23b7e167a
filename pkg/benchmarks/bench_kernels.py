"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--run-steps 200]

Times the Thomas sweep and the cell-wise pressure inversion at several sizes,
then a short Case 2 run with each backend (in a subprocess, since the backend
is fixed at import). Prints a table and checks that results match.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from congestion1d import _fallback, kernels

RUN_SNIPPET = """
import time, numpy as np
from congestion1d import kernels
from congestion1d.driver import standard_config, run
cfg = standard_config("case2", t_end={t_end})
t0 = time.perf_counter(); res = run(cfg); dt = time.perf_counter() - t0
print(kernels.BACKEND, dt, float(np.sum(res.final_state.rho)))
"""


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_table(repeat):
    if kernels.BACKEND != "cython":
        print("compiled extension not available; only the fallback can be timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<12}{'n':>8}{'cython [ms]':>14}{'python [ms]':>14}{'speedup':>10}")
    for n in (1_000, 10_000, 100_000):
        lo, up = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
        d = np.abs(lo) + np.abs(up) + 1.0
        rhs = rng.normal(size=(n, 2))
        tc = bench(lambda: kernels.thomas_solve(lo, d, up, rhs), repeat)
        tp = bench(lambda: _fallback.thomas_solve(lo, d, up, rhs), repeat)
        assert np.array_equal(kernels.thomas_solve(lo, d, up, rhs), _fallback.thomas_solve(lo, d, up, rhs))
        print(f"{'thomas':<12}{n:>8}{tc * 1e3:>14.3f}{tp * 1e3:>14.3f}{tp / tc:>10.1f}")
    for n in (1_000, 10_000, 100_000):
        z = rng.uniform(0.0, 0.999, n)
        target = 1e-4 * z**3 / (1 - z) ** 1.5
        zmax = np.nextafter(1.0, 0.0)
        tc = bench(lambda: kernels.invert_singular(target, 1e-4, 3.0, 1.5, zmax), repeat)
        tp = bench(lambda: _fallback.invert_singular(target, 1e-4, 3.0, 1.5, zmax), repeat)
        print(f"{'invert':<12}{n:>8}{tc * 1e3:>14.3f}{tp * 1e3:>14.3f}{tp / tc:>10.1f}")


def run_table(steps):
    t_end = steps * 1e-4
    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, CONGESTION1D_PURE_PYTHON=flag)
        out = subprocess.run(
            [sys.executable, "-c", RUN_SNIPPET.format(t_end=t_end)], env=env, capture_output=True, text=True, check=True
        ).stdout.split()
        rows.append((out[0], float(out[1]), out[2]))
    print(f"\ncase2, N=1000, {steps} steps")
    for backend, secs, mass in rows:
        print(f"  {backend:<8}{secs:8.2f} s   sum(rho) = {mass}")
    print("  identical results:", rows[0][2] == rows[1][2])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--run-steps", type=int, default=200)
    args = ap.parse_args()
    kernel_table(args.repeat)
    if args.run_steps > 0:
        run_table(args.run_steps)


if __name__ == "__main__":
    main()

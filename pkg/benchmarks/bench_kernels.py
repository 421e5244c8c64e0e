"""Compiled vs numpy backend for the density-matrix RK4 stage and a full run.

    python benchmarks/bench_kernels.py [--grid 256] [--repeat 20]
"""

import argparse
import time

import numpy as np

from collapseheat.sim import SimConfig, evolve
from collapseheat.sim._backend import BACKENDS


def _stage_inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    c = lambda: np.ascontiguousarray(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    rho = c()
    rho = np.ascontiguousarray(0.5 * (rho + rho.conj().T))
    dv = np.ascontiguousarray(rng.normal(size=(n, n)))
    gamma = np.ascontiguousarray(np.abs(rng.normal(size=(n, n))))
    return c(), rho, dv, gamma


def bench_stage(kern, n, repeat):
    a, rho, dv, gamma = _stage_inputs(n)
    acc = rho.copy()
    stage = rho.copy()
    kern.rk4_stage(a, stage, dv, gamma, acc, 0.1, rho, 0.05, True)  # warm-up
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        kern.rk4_stage(a, stage, dv, gamma, acc, 0.1, rho, 0.05, True)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_evolve(name, n):
    cfg = SimConfig(grid_points=n, box_length=64.0, t_end=0.05, n_samples=11)
    t0 = time.perf_counter()
    series = evolve(cfg, backend=name)
    return time.perf_counter() - t0, series


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    print(f"backends available: {', '.join(sorted(BACKENDS))}")
    results = {}
    for name, kern in sorted(BACKENDS.items()):
        stage = bench_stage(kern, args.grid, args.repeat)
        total, series = bench_evolve(name, args.grid)
        results[name] = (stage, total, series)
        steps = round(series.t[-1] / series.dt)
        print(f"{name:<7} rk4_stage n={args.grid}: {stage * 1e3:8.3f} ms   evolve ({steps} steps): {total:7.2f} s")
    if len(results) == 2:
        (s_c, t_c, a), (s_n, t_n, b) = results["cython"], results["numpy"]
        diff = float(np.max(np.abs(a.energy - b.energy)))
        print(f"speed-up: stage x{s_n / s_c:.2f}, evolve x{t_n / t_c:.2f}; max energy difference {diff:.1e}")


if __name__ == "__main__":
    main()

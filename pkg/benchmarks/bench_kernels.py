#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Workloads mirror real use: full routing LPs at a few sizes, and GF(256)
eliminations at decoder-typical shapes.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

import relaycast._kernel_py as kernel_py
from relaycast import kernels
from relaycast.gf256 import INV_TABLE, MUL_TABLE
from relaycast.placement import multicast_groups
from relaycast.routing import build_maxlink_lp
from relaycast.simplex import solve
from relaycast.topology import generate_random_uniform

try:
    import relaycast._kernel as kernel_c
except ImportError:
    kernel_c = None

BACKENDS = {"python": kernel_py}
if kernel_c is not None:
    BACKENDS["compiled"] = kernel_c


def time_lp_solves(backend, repeats):
    kernels.simplex_phase = backend.simplex_phase
    cases = []
    for K, H, t in [(5, 10, 2), (6, 12, 2), (7, 10, 2)]:
        topo = generate_random_uniform(H, K, 2, seed=K * 100 + H)
        groups = multicast_groups(K, t)
        cases.append(build_maxlink_lp(topo, groups).problem)
    start = time.perf_counter()
    for _ in range(repeats):
        for problem in cases:
            solve(problem)
    return (time.perf_counter() - start) / (repeats * len(cases))


def time_gf_eliminations(backend, repeats):
    rng = np.random.default_rng(0)
    cases = [
        rng.integers(0, 256, size=(40, 32 + 32), dtype=np.uint8)
        for _ in range(20)
    ]
    start = time.perf_counter()
    for _ in range(repeats):
        for matrix in cases:
            backend.gf256_eliminate(matrix.copy(), 32, MUL_TABLE, INV_TABLE)
    return (time.perf_counter() - start) / (repeats * len(cases))


def main():
    original = kernels.simplex_phase
    print(f"active backend at import: {kernels.BACKEND}")
    if kernel_c is None:
        print("compiled extension not built; benchmarking the fallback only")
    rows = []
    for name, backend in BACKENDS.items():
        lp = time_lp_solves(backend, repeats=20)
        gf = time_gf_eliminations(backend, repeats=20)
        rows.append((name, lp * 1e3, gf * 1e6))
    kernels.simplex_phase = original
    print(f"{'backend':<10} {'LP solve (ms)':<16} {'GF eliminate (us)':<18}")
    for name, lp_ms, gf_us in rows:
        print(f"{name:<10} {lp_ms:<16.3f} {gf_us:<18.1f}")
    if len(rows) == 2:
        speed_lp = rows[0][1] / rows[1][1]
        speed_gf = rows[0][2] / rows[1][2]
        print(f"compiled speedup: {speed_lp:.2f}x on LP solves, {speed_gf:.2f}x on eliminations")


if __name__ == "__main__":
    main()

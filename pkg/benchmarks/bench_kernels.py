#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-NumPy fallback.

Times the hot kernels (Dawson evaluation and the filtered-profile
evaluations, array and scalar) plus one representative end-to-end
workload (a Fisher quadrature) under the active backend.  Run after
building the extension:

    python benchmarks/bench_kernels.py
"""

import time
import timeit

import numpy as np

from sgnsep import _kernels_py

try:
    from sgnsep import _kernels
except ImportError:
    _kernels = None


def _best_of(fn, repeat=3, number=1):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_array_kernels():
    z = np.linspace(-8.0, 8.0, 200_000)
    u = np.linspace(-12.0, 12.0, 200_000)
    cases = [
        ("dawson (2e5 array)", lambda mod: mod.dawson(z)),
        ("sgn_intensity (2e5 array)", lambda mod: mod.sgn_intensity(u, 1.0)),
        ("sgn_intensity_prime (2e5 array)", lambda mod: mod.sgn_intensity_prime(u, 1.0)),
        ("direct_intensity (2e5 array)", lambda mod: mod.direct_intensity(u, 1.0)),
    ]
    return cases


def bench_scalar_kernels():
    zs = np.linspace(0.01, 7.5, 10_000)

    def scalar_sweep(mod):
        d = mod.dawson
        for z in zs:
            d(float(z))

    return [("dawson (1e4 scalar calls)", scalar_sweep)]


def main():
    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("compiled extension not available; timing the fallback only\n")

    rows = []
    for label, fn in bench_array_kernels() + bench_scalar_kernels():
        times = {name: _best_of(lambda m=mod: fn(m)) for name, mod in backends}
        rows.append((label, times))

    width = max(len(r[0]) for r in rows) + 2
    header = f"{'kernel':<{width}}" + "".join(f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, times in rows:
        line = f"{label:<{width}}"
        for name, _ in backends:
            line += f"{times[name] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            line += f"{times['python'] / times['cython']:>9.1f}x"
        print(line)

    # end-to-end sample under the active backend
    from sgnsep import BACKEND, fisher_continuous, gaussian_sgn_family

    family = gaussian_sgn_family(1.0)
    t0 = time.perf_counter()
    for s in (0.01, 0.05, 0.2):
        fisher_continuous(family, s)
    dt = time.perf_counter() - t0
    print(f"\nfisher_continuous x3 under active backend ({BACKEND}): {dt * 1e3:.1f} ms")
    print("rerun with SGNSEP_BACKEND=python to force the fallback end to end")


if __name__ == "__main__":
    main()

"""Throughput comparison: compiled vs pure-python smoothed-profile kernel.

Both backends evaluate the same composite Gauss-Legendre rule, so values are
bit-comparable; only speed differs.  Run:

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

import pointreg as pr
from pointreg.backend import power_heaviside, reference_power_heaviside


def bench(fn, kernel, n, a, eps, r, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(kernel, n, a, eps, r)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    a, eps = 0.1, 1e-3
    print(f"active backend: {pr.BACKEND}")
    header = f"{'kernel':<10} {'n':>2} {'points':>8} {'compiled':>12} {'python':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name in ("gaussian", "bump"):
        kernel = pr.kernel_by_name(name)
        for n in (2, 3):
            for size in (1_000, 20_000):
                r = np.linspace(0.0, 1.0, size)
                t_active = bench(power_heaviside, kernel, n, a, eps, r)
                t_ref = bench(reference_power_heaviside, kernel, n, a, eps, r)
                va = power_heaviside(kernel, n, a, eps, r)
                vr = reference_power_heaviside(kernel, n, a, eps, r)
                err = np.max(np.abs(va - vr))
                print(
                    f"{name:<10} {n:>2} {size:>8} {t_active*1e3:>10.2f}ms "
                    f"{t_ref*1e3:>10.2f}ms {t_ref/t_active:>7.1f}x  "
                    f"(max |diff| {err:.1e})"
                )


if __name__ == "__main__":
    main()

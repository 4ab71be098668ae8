#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from empirica import _pykernels

try:
    from empirica import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name, args_fn, repeat=5):
    args = args_fn()
    t_py = _time(getattr(_pykernels, name), *args, repeat=repeat)
    if _ckernels is None:
        print(f"{name:20s} pure {t_py * 1e3:9.2f} ms   (extension not built)")
        return
    t_c = _time(getattr(_ckernels, name), *args, repeat=repeat)
    a = getattr(_ckernels, name)(*args)
    b = getattr(_pykernels, name)(*args)
    if isinstance(a, tuple):
        identical = all(np.array_equal(x, y) for x, y in zip(a, b))
    else:
        identical = np.array_equal(a, b)
    print(
        f"{name:20s} pure {t_py * 1e3:9.2f} ms   compiled {t_c * 1e3:9.2f} ms   "
        f"speedup {t_py / t_c:6.1f}x   identical={identical}"
    )


def main():
    rng = np.random.default_rng(0)

    def count_args():
        values = np.ascontiguousarray(rng.random((20000, 200)))
        thresholds = np.ascontiguousarray(np.sort(rng.random(32)))
        return values, thresholds

    def scan_args():
        n = 10000
        rows = np.ascontiguousarray(np.sort(rng.random((2000, n)), axis=1))
        hi = np.arange(1, n + 1, dtype=float) / n
        lo = np.arange(0, n, dtype=float) / n
        return rows, hi, lo

    def dp_args():
        k = 400
        g_cuts = np.sort(rng.uniform(-1, 1, k))
        f_cuts = np.sort(rng.uniform(-1, 1, k))
        g_vals = np.cumsum(rng.choice([-1.0, 1.0], k + 1))
        f_vals = np.cumsum(rng.choice([-1.0, 1.0], k + 1))
        return g_vals, f_vals, g_cuts, f_cuts, -1.0, 1.0

    print("kernel                    fallback            extension")
    bench("count_leq", count_args)
    bench("changepoint_scan", scan_args)
    bench("j1_alignment_dp", dp_args, repeat=3)


if __name__ == "__main__":
    main()

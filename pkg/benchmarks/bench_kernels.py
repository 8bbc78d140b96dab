"""Time the numba kernels against the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 2000]

Both backends run in the same process through the ``backend=`` argument;
numba is warmed up once before timing so compilation is not counted.
"""
import argparse
import time

import numpy as np

from dualeq2 import _kernels
from dualeq2.lattice import FiniteVector
from dualeq2.qexp import QexpParams, apply_fq_shift_class


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(points, rng):
    lam = 0.5 ** rng.integers(-6, 7, 50_000) * np.exp(1j * rng.uniform(-3, 3, 50_000))
    X = rng.integers(-20, 21, size=(200_000, 4))
    V = rng.normal(size=len(X)) + 1j * rng.normal(size=len(X))
    coords = np.unique(rng.integers(-6, 7, size=(points, 4)), axis=0)
    vec = FiniteVector(4, coords, np.ones(len(coords), complex) / np.sqrt(len(coords)))
    params = QexpParams(0.3 + 0.4j)
    return {
        "fq_product (50k points)": lambda b: _kernels.fq_product(lam, 0.5, 60, backend=b),
        "coalesce (200k rows)": lambda b: _kernels.coalesce(X, V, 0.0, backend=b),
        f"F_q(X_hat) on {len(coords)} basis vectors":
            lambda b: apply_fq_shift_class(vec, params=params, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=2000)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or DUALEQ2_NUMBA=0); timing the numpy backend only")
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    print(f"{'kernel':<40}" + "".join(f"{b:>12}" for b in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for name, fn in cases(args.points, rng).items():
        for b in backends:
            fn(b)  # warm-up and jit compile
        t = [best_of(lambda: fn(b), args.repeat) for b in backends]
        ratio = f"{t[0] / t[1]:8.1f}x" if len(t) == 2 else ""
        print(f"{name:<40}" + "".join(f"{x * 1e3:10.2f}ms" for x in t) + f"  {ratio}")


if __name__ == "__main__":
    main()

"""Time each hot kernel on its numba path and its pure-numpy path.

Usage::

    python benchmarks/bench_kernels.py            # default sizes
    python benchmarks/bench_kernels.py --repeat 5 --scale 2

Each kernel runs once untimed on both paths (JIT compilation), then
``--repeat`` timed runs; the best time is reported together with the largest
relative difference between the two paths' outputs.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Callable

import numpy as np

from chofisher import kernels
from chofisher._accel import HAVE_NUMBA, backend


def _best_time(fn: Callable[[], object], repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _max_rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(a), np.abs(b)).max()
    return float(np.abs(a - b).max() / scale) if scale > 0 else 0.0


def _cases(scale: int, rng: np.random.Generator) -> dict[str, Callable[[bool], object]]:
    x_kummer = np.sort(rng.uniform(0.0, 40.0, 2000 * scale))
    x_bessel = np.sort(rng.uniform(0.0, 200.0, 20000 * scale))
    nr, npts = 512 * scale, 256 * scale
    r = np.sort(rng.uniform(0.0, 1.0, nr))
    p = np.sort(rng.uniform(0.0, 300.0, npts))
    f = rng.standard_normal((2, nr))
    fd = rng.standard_normal((2, nr))
    n = 4000 * scale
    h = 1.0 / (n + 1)
    grid = h * np.arange(1, n + 1)
    diag = 1.0 / h**2 + 0.5 * grid**2
    off = np.full(n - 1, -0.5 / h**2)

    return {
        "kummer_series": lambda nb: kernels.kummer_series(0.25, 2.5, x_kummer, nb, a_int=-3)[0],
        "sph_jn": lambda nb: np.concatenate(kernels.sph_jn(6, x_bessel, nb)),
        "bessel_sums": lambda nb: np.concatenate(kernels.bessel_sums(3, p, r, f, fd, nb)).ravel(),
        "tridiag_lowest": lambda nb: kernels.tridiag_lowest(diag, off, 3, use_numba=nb),
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timed runs per kernel and path")
    parser.add_argument("--scale", type=int, default=1, help="multiply problem sizes")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    print(f"backend: {backend()}")
    if not HAVE_NUMBA:
        print("numba not installed or disabled by CHOFISHER_NO_NUMBA; timing the numpy path only")
    cases = _cases(max(1, args.scale), np.random.default_rng(args.seed))
    print(f"{'kernel':<16}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, run in cases.items():
        ref = run(False)
        t_np = _best_time(lambda: run(False), args.repeat)
        if HAVE_NUMBA:
            out = run(True)
            t_nb = _best_time(lambda: run(True), args.repeat)
            print(f"{name:<16}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}{_max_rel(ref, out):>15.2e}")
        else:
            print(f"{name:<16}{t_np:>12.4f}{'-':>12}{'-':>10}{'-':>15}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

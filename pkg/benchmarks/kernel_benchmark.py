"""Time the numba kernels against their pure-numpy fallbacks.

Runs the three per-segment kernels on randomized matched columns of
growing size and prints a table of best-of-repeat timings plus the
speedup. The numba side is warmed (and cached) before timing so compile
time is excluded.

Usage: python benchmarks/kernel_benchmark.py [--repeats 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cimcol import _kernels

SIZES = (64, 256, 1024)
I_BIAS = 1e-5
R_S = 1e4
G_OUT = 1e-7
V_SUPPLY = 0.8


def _column(rng, n):
    w = rng.uniform(-0.98, 0.98, n)
    g_total = 10.1e-6
    gp = 0.5 * g_total * (1.0 + w)
    gn = g_total - gp
    x = rng.uniform(0.0, 1e-7, n)
    edges = np.unique(np.concatenate((x[(x > 0.0) & (x < 1e-7)], (0.0, 1e-7))))
    return gp, gn, x, edges


def _calls(gp, gn, x, edges):
    return (
        ("culd_ideal", (gp, gn, x, edges, False, I_BIAS)),
        ("culd_nonideal", (gp, gn, x, edges, False, I_BIAS, R_S, G_OUT, V_SUPPLY)),
        ("discharge", (gp, gn, x, edges)),
    )


def _best(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    impls = {
        "culd_ideal": (_kernels.culd_ideal_totals_numpy, _kernels.culd_ideal_totals_numba),
        "culd_nonideal": (
            _kernels.culd_nonideal_totals_numpy,
            _kernels.culd_nonideal_totals_numba,
        ),
        "discharge": (_kernels.discharge_line_totals_numpy, _kernels.discharge_line_totals_numba),
    }
    have_numba = all(jit is not None for _, jit in impls.values())
    print(f"active backend: {_kernels.BACKEND}  (numba available: {have_numba})")
    print(f"{'kernel':<16}{'n':>6}{'numpy':>12}{'numba':>12}{'speedup':>10}")

    rng = np.random.default_rng(42)
    for n in SIZES:
        gp, gn, x, edges = _column(rng, n)
        for name, call_args in _calls(gp, gn, x, edges):
            np_fn, nb_fn = impls[name]
            t_np = _best(np_fn, call_args, args.repeats)
            if nb_fn is not None:
                nb_fn(*call_args)  # warm the JIT outside the timer
                t_nb = _best(nb_fn, call_args, args.repeats)
                ratio = f"{t_np / t_nb:9.1f}x"
                t_nb_s = f"{t_nb * 1e3:10.3f}ms"
            else:
                ratio, t_nb_s = f"{'n/a':>10}", f"{'n/a':>12}"
            print(f"{name:<16}{n:>6}{t_np * 1e3:10.3f}ms{t_nb_s}{ratio}")


if __name__ == "__main__":
    main()

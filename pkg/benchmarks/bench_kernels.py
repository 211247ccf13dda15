"""Benchmark the sector matvec: numba kernel vs pure-numpy fallback.

The matvec over a fixed-magnetization basis is the hot loop of the Lanczos
solver.  This script times both backends on the same inputs and reports the
speedup, plus an end-to-end Lanczos solve with whichever backend the
environment selected (CAVITYXXZ_KERNELS=numpy|numba).

Usage: python benchmarks/bench_kernels.py [n_sites]
"""

import sys
import time

import numpy as np

from cavityxxz import kernels
from cavityxxz.exactdiag import lanczos_ground
from cavityxxz.model import (
    ModelParams,
    diagonal_elements,
    make_sector_matvec,
    pair_tables,
    sector_basis,
)


def time_call(fn, *args, repeats):
    fn(*args)  # warm-up (includes JIT compilation for the numba path)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 16
    p = ModelParams(1.5, 0.5, n)
    basis = sector_basis(n, n // 2)
    diag = diagonal_elements(p, basis.states)
    ii, jj, masks, coefs = pair_tables(p)
    v = np.random.default_rng(0).standard_normal(basis.size)
    args = (basis.states, basis.index_lookup, diag, ii, jj, masks, coefs, v)
    repeats = max(3, 2_000_000 // basis.size)

    print(f"sector matvec: N={n}, n_up={n // 2}, dimension {basis.size}, "
          f"{len(ii)} coupled pairs, best of {repeats}")
    t_numpy = time_call(kernels._matvec_numpy, *args, repeats=repeats)
    print(f"  numpy   {t_numpy * 1e3:9.3f} ms")
    if hasattr(kernels, "_matvec_numba"):
        t_numba = time_call(kernels._matvec_numba, *args, repeats=repeats)
        print(f"  numba   {t_numba * 1e3:9.3f} ms   ({t_numpy / t_numba:.1f}x)")
        err = np.abs(kernels._matvec_numba(*args) - kernels._matvec_numpy(*args)).max()
        print(f"  backends agree to {err:.2e}")
    else:
        print("  numba unavailable (CAVITYXXZ_KERNELS=numpy or import failed)")

    t0 = time.perf_counter()
    energy, _ = lanczos_ground(make_sector_matvec(p, basis), basis.size, seed=0)
    print(f"Lanczos ground state via '{kernels.BACKEND}' backend: "
          f"E = {energy:.10f} in {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()

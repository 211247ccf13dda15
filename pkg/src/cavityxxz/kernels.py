"""Hot inner kernels: sector-restricted Hamiltonian matvec.

The matvec over a fixed-magnetization basis is a bit-twiddling loop over
basis states and spin pairs; it dominates Lanczos runtimes.  Two
implementations are provided:

* a numba ``@njit`` kernel (default when numba imports cleanly), and
* a pure-numpy fallback vectorized over the basis dimension.

Select explicitly with the environment variable ``CAVITYXXZ_KERNELS=numpy``
or ``CAVITYXXZ_KERNELS=numba``.  ``benchmarks/bench_kernels.py`` times both.
"""

import os

import numpy as np

_REQUESTED = os.environ.get("CAVITYXXZ_KERNELS", "auto").strip().lower()
if _REQUESTED not in ("auto", "numba", "numpy"):
    raise ValueError(f"CAVITYXXZ_KERNELS must be 'numba' or 'numpy', got {_REQUESTED!r}")


def _matvec_numpy(states, lookup, diag, pair_i, pair_j, pair_mask, pair_coef, v):
    out = diag * v
    for p in range(pair_i.shape[0]):
        bi = (states >> pair_i[p]) & 1
        bj = (states >> pair_j[p]) & 1
        anti = bi != bj
        src = states[anti]
        # XOR with the pair mask is a bijection on antiparallel states, so
        # target indices are unique and fancy-index += is safe.
        out[lookup[src ^ pair_mask[p]]] += pair_coef[p] * v[anti]
    return out


if _REQUESTED in ("auto", "numba"):
    try:
        from numba import njit

        @njit(cache=True)
        def _matvec_numba(states, lookup, diag, pair_i, pair_j, pair_mask, pair_coef, v):  # pragma: no cover - timed via tests of the wrapper
            dim = states.shape[0]
            npairs = pair_i.shape[0]
            out = np.empty(dim)
            for m in range(dim):
                out[m] = diag[m] * v[m]
            for m in range(dim):
                s = states[m]
                vm = v[m]
                for p in range(npairs):
                    if (((s >> pair_i[p]) ^ (s >> pair_j[p])) & 1) == 1:
                        out[lookup[s ^ pair_mask[p]]] += pair_coef[p] * vm
            return out

        BACKEND = "numba"
    except ImportError:
        if _REQUESTED == "numba":
            raise
        BACKEND = "numpy"
else:
    BACKEND = "numpy"


def sector_matvec(states, lookup, diag, pair_i, pair_j, pair_mask, pair_coef, v):
    """Apply the sector Hamiltonian block to ``v``.

    ``diag`` holds the diagonal matrix elements per basis state; the pair
    arrays enumerate the XX couplings (index pair, flip mask, amplitude).
    """
    if BACKEND == "numba":
        return _matvec_numba(states, lookup, diag, pair_i, pair_j, pair_mask, pair_coef, v)
    return _matvec_numpy(states, lookup, diag, pair_i, pair_j, pair_mask, pair_coef, v)

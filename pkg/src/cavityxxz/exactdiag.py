"""Small-N exact diagonalization: the ground-truth oracle.

Sector-resolved dense and Lanczos solvers, ground-state observables, and the
cut entanglement entropy.  Everything here is used to validate the spin-wave
and DMRG backends at sizes where exactness is affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCut, NoConvergence, SizeExceeded
from .model import (
    ModelParams,
    SectorBasis,
    make_sector_matvec,
    magnetization_sectors,
    sector_basis,
    sector_dense_block,
)

DENSE_SECTOR_LIMIT = 4096
LANCZOS_SECTOR_LIMIT = 200_000
LANCZOS_TOL = 1e-10
LANCZOS_MAX_ITER = 500
DEGENERACY_TOL = 1e-9
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SectorState:
    """Normalized ground state of one magnetization sector."""

    params: ModelParams
    n_up: int
    energy: float
    amplitudes: np.ndarray = field(repr=False)
    basis: SectorBasis = field(repr=False)


@dataclass(frozen=True, eq=False)
class Correlators:
    """One- and two-point functions of a sector state.

    sz : per-site <sz_i>
    czz: <sz_i sz_j> (diagonal 1)
    cpm: <S+_i S-_j> (diagonal (1 + <sz_i>)/2); real symmetric for the real
         ground states handled here, which is the Hermitian-symmetry condition
         cpm(i, j) = conj(cpm(j, i)).
    """

    sz: np.ndarray
    czz: np.ndarray
    cpm: np.ndarray


@dataclass(frozen=True, eq=False)
class GroundStateReport:
    """Global minimum over all magnetization sectors."""

    energy: float
    sector: int
    degenerate_sectors: list[int]
    sector_energies: dict[int, float]
    state: SectorState
    observables: Correlators


def lanczos_ground(matvec, dim: int, seed: int = 0, tol: float = LANCZOS_TOL,
                   max_iter: int = LANCZOS_MAX_ITER):
    """Lowest eigenpair by Lanczos with full reorthogonalization.

    Full reorthogonalization is affordable at desk-scale dimensions and
    eliminates ghost eigenvalues; the start vector is seeded for determinism.
    Raises NoConvergence if the residual stalls above tolerance.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    if dim == 1:
        theta = float(matvec(np.ones(1))[0])
        return theta, np.ones(1)

    basis = np.empty((min(max_iter + 1, dim), dim))
    basis[0] = v
    alphas: list[float] = []
    betas: list[float] = []
    residual = np.inf
    w = matvec(v)
    for it in range(min(max_iter, dim)):
        a = float(v @ w)
        alphas.append(a)
        w = w - a * v
        if it > 0:
            w = w - betas[-1] * basis[it - 1]
        # full reorthogonalization against all stored vectors
        w -= basis[: it + 1].T @ (basis[: it + 1] @ w)
        b = float(np.linalg.norm(w))

        t = np.diag(alphas)
        if betas:
            off = np.array(betas)
            t += np.diag(off, 1) + np.diag(off, -1)
        evals, evecs = np.linalg.eigh(t)
        theta = float(evals[0])
        y = evecs[:, 0]
        residual = abs(b * y[-1])
        if residual <= tol * max(1.0, abs(theta)) or b < 1e-14 or it + 1 == dim:
            vec = basis[: it + 1].T @ y
            vec /= np.linalg.norm(vec)
            return theta, vec
        betas.append(b)
        v = w / b
        basis[it + 1] = v
        w = matvec(v)
    raise NoConvergence(max_iter, residual)


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(vec)))
    return -vec if vec[k] < 0 else vec


def sector_ground_state(p: ModelParams, n_up: int, method: str = "auto",
                        seed: int = 0) -> SectorState:
    """Lowest eigenpair of one magnetization block.

    method 'auto' uses the dense solver up to dimension 4096 and Lanczos
    beyond; 'dense' / 'lanczos' force a path (for cross-validation).
    """
    basis = sector_basis(p.n_sites, n_up)
    dim = basis.size
    if method == "auto":
        method = "dense" if dim <= DENSE_SECTOR_LIMIT else "lanczos"
    if method == "dense":
        if dim > DENSE_SECTOR_LIMIT:
            raise SizeExceeded(f"dense sector solver limited to {DENSE_SECTOR_LIMIT}, got {dim}")
        block = sector_dense_block(p, basis)
        evals, evecs = np.linalg.eigh(block)
        energy, vec = float(evals[0]), evecs[:, 0]
    elif method == "lanczos":
        if dim > LANCZOS_SECTOR_LIMIT:
            raise SizeExceeded(f"Lanczos sector solver limited to {LANCZOS_SECTOR_LIMIT}, got {dim}")
        energy, vec = lanczos_ground(make_sector_matvec(p, basis), dim, seed=seed)
    else:
        raise ValueError(f"unknown method {method!r}")

    vec = _fix_sign(vec / np.linalg.norm(vec))
    matvec = make_sector_matvec(p, basis)
    resid = float(np.linalg.norm(matvec(vec) - energy * vec))
    if resid > RESIDUAL_TOL:
        raise NoConvergence(0, resid)
    return SectorState(p, n_up, energy, vec, basis)


def global_ground_state(p: ModelParams, method: str = "auto", seed: int = 0) -> GroundStateReport:
    """Scan every magnetization sector and report the global minimum.

    Sectors within 1e-9 of the minimum are listed as degenerate; the reported
    state comes from the lowest-n_up winner.
    """
    states = [sector_ground_state(p, n_up, method=method, seed=seed)
              for n_up in range(p.n_sites + 1)]
    energies = {s.n_up: s.energy for s in states}
    e0 = min(energies.values())
    degenerate = [n_up for n_up, e in energies.items() if e <= e0 + DEGENERACY_TOL]
    winner = states[degenerate[0]]
    return GroundStateReport(
        energy=e0,
        sector=winner.n_up,
        degenerate_sectors=degenerate,
        sector_energies=energies,
        state=winner,
        observables=correlators(winner),
    )


def bipartition_matrix(state: SectorState, cut: int) -> np.ndarray:
    """Amplitudes arranged as a (2^cut, 2^(N-cut)) matrix for the cut."""
    n = state.params.n_sites
    m = np.zeros((1 << cut, 1 << (n - cut)))
    left = state.basis.states & ((1 << cut) - 1)
    right = state.basis.states >> cut
    m[left, right] = state.amplitudes
    return m


def schmidt_coefficients(state: SectorState, cut: int) -> np.ndarray:
    """Schmidt weights (squared singular values) across the cut, descending."""
    n = state.params.n_sites
    if not 1 <= cut <= n - 1:
        raise InvalidCut(f"cut must lie in 1..{n - 1}, got {cut}")
    svals = np.linalg.svd(bipartition_matrix(state, cut), compute_uv=False)
    return svals**2


def entropy_from_weights(weights: np.ndarray) -> float:
    w = weights[weights > 1e-16]
    return max(float(-np.sum(w * np.log(w))), 0.0)


def cut_entanglement_entropy(state: SectorState, cut: int) -> float:
    """Von Neumann entropy -sum(w ln w) of the bipartition at ``cut`` sites.

    Natural logarithm; bounded by min(cut, N-cut) * ln 2.
    """
    return entropy_from_weights(schmidt_coefficients(state, cut))


def correlators(state: SectorState) -> Correlators:
    """sz profile, <sz sz>, and <S+ S-> matrices of a sector state.

    Within a fixed-magnetization eigenstate <S+_j> itself vanishes exactly, so
    transverse (XY) order shows up only as a long-distance plateau of cpm.
    """
    n = state.params.n_sites
    amps = state.amplitudes
    states = state.basis.states
    lookup = state.basis.index_lookup
    prob = amps**2

    bits = (states[:, None] >> np.arange(n)[None, :]) & 1
    z = 2.0 * bits - 1.0
    sz = prob @ z

    czz = z.T @ (prob[:, None] * z)

    cpm = np.zeros((n, n))
    np.fill_diagonal(cpm, (1.0 + sz) / 2.0)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            # S+_i S-_j needs bit i = 0 and bit j = 1 on the source state
            ok = (bits[:, i] == 0) & (bits[:, j] == 1)
            src = states[ok]
            tgt = lookup[src ^ ((1 << i) | (1 << j))]
            cpm[i, j] = float(amps[tgt] @ amps[ok])
    return Correlators(sz=sz, czz=czz, cpm=cpm)

"""Spin-1/2 XXZ chain with a uniform infinite-range XX coupling.

The Hamiltonian on N sites is

    H = -(1/4) sum_bonds [ sz_i sz_{i+1} + alpha (sx_i sx_{i+1} + sy_i sy_{i+1}) ]
        - (J / 4N) sum_{i<j} (sx_i sx_j + sy_i sy_j)

with Pauli matrices ``s``.  The nearest-neighbor ZZ coupling sets the energy
unit.  The all-to-all XX term runs over every unordered pair (adjacent pairs
included) and carries the extensive 1/N normalization; with this sign a
positive J rewards uniform transverse alignment and drives the XY-ordered
phase, while J < 0 penalizes it.

Basis conventions: site 0 is the least-significant bit of a basis bitmask,
bit value 1 means spin-up, and sz|up> = +|up>, so popcount(state) equals the
number of up spins.  H commutes with the total sz, and all solvers work in
fixed-magnetization sectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidParams, SizeExceeded

OPEN = "open"
PERIODIC = "periodic"

# Memory guard for the full 2^N dense matrix.
DENSE_FULL_LIMIT = 14


@dataclass(frozen=True)
class ModelParams:
    """Couplings and geometry of one Hamiltonian instance.

    alpha   : transverse/longitudinal anisotropy of the nearest-neighbor term
    j_lr    : strength of the uniform infinite-range XX coupling
    n_sites : chain length N >= 2
    boundary: 'open' (default; used by ED and DMRG) or 'periodic' (used by
              the spin-wave formulas)
    """

    alpha: float
    j_lr: float
    n_sites: int
    boundary: str = OPEN

    def __post_init__(self):
        if self.n_sites < 2:
            raise InvalidParams(f"n_sites must be >= 2, got {self.n_sites}")
        if self.boundary not in (OPEN, PERIODIC):
            raise InvalidParams(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """Ordered basis of the fixed-magnetization block with n_up up spins."""

    n_sites: int
    n_up: int
    states: np.ndarray = field(repr=False)
    index_lookup: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.states.shape[0]

    def __len__(self) -> int:
        return self.size

    def index_of(self, state: int) -> int:
        idx = int(self.index_lookup[state])
        if idx < 0:
            raise KeyError(f"state {state:b} not in sector n_up={self.n_up}")
        return idx


def _popcounts(x: np.ndarray, n_bits: int) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(x)
    counts = np.zeros_like(x)
    for b in range(n_bits):
        counts += (x >> b) & 1
    return counts


def sector_basis(n_sites: int, n_up: int) -> SectorBasis:
    """Build the sorted basis of all bitmasks with popcount n_up."""
    if not 0 <= n_up <= n_sites:
        raise InvalidParams(f"n_up must lie in 0..{n_sites}, got {n_up}")
    everything = np.arange(1 << n_sites, dtype=np.int64)
    states = everything[_popcounts(everything, n_sites) == n_up]
    lookup = np.full(1 << n_sites, -1, dtype=np.int64)
    lookup[states] = np.arange(states.shape[0])
    assert states.shape[0] == comb(n_sites, n_up)
    return SectorBasis(n_sites, n_up, states, lookup)


def magnetization_sectors(n_sites: int) -> list[SectorBasis]:
    """All magnetization sectors, n_up = 0..N; together they cover 2^N states."""
    return [sector_basis(n_sites, n_up) for n_up in range(n_sites + 1)]


def _bonds(p: ModelParams) -> list[tuple[int, int]]:
    bonds = [(i, i + 1) for i in range(p.n_sites - 1)]
    if p.boundary == PERIODIC:
        bonds.append((0, p.n_sites - 1))
    return bonds


def pair_tables(p: ModelParams):
    """Index/mask/amplitude arrays for every XX coupling in H.

    Each unordered pair (i < j) appears once; the amplitude is the matrix
    element created by flipping an antiparallel pair.  When j_lr == 0 only
    nearest-neighbor pairs are emitted.
    """
    n = p.n_sites
    bond_set = set(_bonds(p))
    lr = -p.j_lr / (2.0 * n)
    ii, jj, masks, coefs = [], [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            coef = lr
            if (i, j) in bond_set:
                coef += -p.alpha / 2.0
            if coef == 0.0:
                continue
            ii.append(i)
            jj.append(j)
            masks.append((1 << i) | (1 << j))
            coefs.append(coef)
    return (
        np.asarray(ii, dtype=np.int64),
        np.asarray(jj, dtype=np.int64),
        np.asarray(masks, dtype=np.int64),
        np.asarray(coefs, dtype=np.float64),
    )


def diagonal_elements(p: ModelParams, states: np.ndarray) -> np.ndarray:
    """Diagonal of H over the given basis states (the ZZ part)."""
    z = 2.0 * ((states[:, None] >> np.arange(p.n_sites)[None, :]) & 1) - 1.0
    diag = np.zeros(states.shape[0])
    for i, j in _bonds(p):
        diag -= 0.25 * z[:, i] * z[:, j]
    return diag


def build_dense_hamiltonian(p: ModelParams) -> np.ndarray:
    """Dense 2^N x 2^N matrix of H in bitmask ordering.

    Real symmetric; commutes with total sz, so it is block diagonal when the
    basis is permuted into magnetization-sector order.
    """
    if p.n_sites > DENSE_FULL_LIMIT:
        raise SizeExceeded(
            f"dense Hamiltonian limited to n_sites <= {DENSE_FULL_LIMIT}, got {p.n_sites}"
        )
    dim = 1 << p.n_sites
    states = np.arange(dim, dtype=np.int64)
    h = np.zeros((dim, dim))
    h[states, states] = diagonal_elements(p, states)
    ii, jj, masks, coefs = pair_tables(p)
    for idx in range(ii.shape[0]):
        bi = (states >> ii[idx]) & 1
        bj = (states >> jj[idx]) & 1
        src = states[bi != bj]
        h[src ^ masks[idx], src] += coefs[idx]
    return h


def sector_dense_block(p: ModelParams, sector: SectorBasis) -> np.ndarray:
    """Dense block of H restricted to one magnetization sector."""
    dim = sector.size
    h = np.zeros((dim, dim))
    h[np.arange(dim), np.arange(dim)] = diagonal_elements(p, sector.states)
    ii, jj, masks, coefs = pair_tables(p)
    for idx in range(ii.shape[0]):
        bi = (sector.states >> ii[idx]) & 1
        bj = (sector.states >> jj[idx]) & 1
        anti = bi != bj
        src = sector.states[anti]
        h[sector.index_lookup[src ^ masks[idx]], np.flatnonzero(anti)] += coefs[idx]
    return h


def apply_hamiltonian(p: ModelParams, sector: SectorBasis, v: np.ndarray) -> np.ndarray:
    """Matrix-free application of the sector block of H to a vector."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (sector.size,):
        raise DimensionMismatch(
            f"vector has shape {v.shape}, sector dimension is {sector.size}"
        )
    diag = diagonal_elements(p, sector.states)
    ii, jj, masks, coefs = pair_tables(p)
    return kernels.sector_matvec(
        sector.states, sector.index_lookup, diag, ii, jj, masks, coefs, v
    )


def make_sector_matvec(p: ModelParams, sector: SectorBasis):
    """Closure with precomputed tables; use for repeated matvecs (Lanczos)."""
    diag = diagonal_elements(p, sector.states)
    ii, jj, masks, coefs = pair_tables(p)
    states, lookup = sector.states, sector.index_lookup

    def matvec(v: np.ndarray) -> np.ndarray:
        return kernels.sector_matvec(states, lookup, diag, ii, jj, masks, coefs, v)

    return matvec


def polarized_phase_boundary(j_lr: float) -> float:
    """Largest alpha at which the z-polarized product state is the ground state.

    From the one-magnon energies of H (periodic, large N): the uniform magnon
    costs 1 - alpha - J/2 while finite-momentum magnons cost 1 - alpha cos(q),
    so the polarized state destabilizes at alpha = 1 - J/2 for J >= 0 and at
    alpha = 1 for J <= 0.  Used to decide when DMRG runs need the degeneracy-
    breaking pinning field.
    """
    return 1.0 - j_lr / 2.0 if j_lr >= 0.0 else 1.0

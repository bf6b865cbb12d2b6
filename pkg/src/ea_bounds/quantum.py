"""Anisotropic quantum cells: dense Hamiltonians, ground eigenvalues, disorder
averages, and anisotropy sweeps.

Per bond the interaction is J_b (a_x X_i X_j + a_y Y_i Y_j + a_z Z_i Z_j).
Since Y only ever appears in pairs, Y_i Y_j = -(iY)_i (iY)_j with iY real, so
every Hamiltonian built here is real symmetric and stays in float64; the
classical limit (0, 0, 1) is diagonal with exactly integer entries for +-1
couplings.  Basis convention matches the spin bitmasks: bit k of a basis
index set means Z_k eigenvalue -1 at site k.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.linalg

from .bounds import CouplingDistribution, _ENUM_GUARD
from .classical import CouplingAssignment, gauge_transform
from .errors import EigensolverError, GuardError

_DENSE_SITE_LIMIT = 10  # 2**10 = 1024-dim dense matrices; cells use 4 or 8
_MC_CHUNK = 512

_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_IY = np.array([[0.0, 1.0], [-1.0, 0.0]])  # iY, real; Y_iY_j = -(iY)_i(iY)_j
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class Anisotropy:
    """Couplings (a_x, a_y, a_z) of the XX/YY/ZZ terms; (0,0,1) is classical."""

    alpha_x: float
    alpha_y: float
    alpha_z: float

    def __post_init__(self):
        for name in ("alpha_x", "alpha_y", "alpha_z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)


CLASSICAL = Anisotropy(0.0, 0.0, 1.0)
XZ = Anisotropy(1.0, 0.0, 1.0)
HEISENBERG = Anisotropy(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class CellHamiltonian:
    geometry: object
    anisotropy: Anisotropy
    couplings: CouplingAssignment
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CellSpectrum:
    ground_energy: float
    eigenvalues: np.ndarray | None = None


def _embed(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    # bit k of the basis index belongs to site k, so site k is the kron
    # factor sitting above 2**k trailing identity dimensions
    return np.kron(np.eye(1 << (n_sites - 1 - site)), np.kron(op, np.eye(1 << site)))


def _check_dense(n_sites: int) -> None:
    if n_sites > _DENSE_SITE_LIMIT:
        raise GuardError(
            f"dense Hamiltonians guarded at {_DENSE_SITE_LIMIT} sites "
            f"(2**{_DENSE_SITE_LIMIT} dimensions); got {n_sites} sites"
        )


@lru_cache(maxsize=8)
def _bond_terms(geometry, aniso: Anisotropy) -> np.ndarray:
    """Stack of per-bond interaction matrices; H(J) = sum_b J_b stack[b]."""
    n = geometry.n_sites
    _check_dense(n)
    dim = 1 << n
    xs = [_embed(_X, k, n) for k in range(n)] if aniso.alpha_x else None
    ws = [_embed(_IY, k, n) for k in range(n)] if aniso.alpha_y else None
    zdiag = [np.diag(_embed(_Z, k, n)) for k in range(n)] if aniso.alpha_z else None
    stack = np.zeros((geometry.n_bonds, dim, dim))
    for b, (i, j) in enumerate(geometry.bonds):
        m = stack[b]
        if xs is not None:
            m += aniso.alpha_x * (xs[i] @ xs[j])
        if ws is not None:
            m -= aniso.alpha_y * (ws[i] @ ws[j])
        if zdiag is not None:
            m[np.diag_indices(dim)] += aniso.alpha_z * (zdiag[i] * zdiag[j])
    return stack


def build_hamiltonian(geometry, J: CouplingAssignment, aniso: Anisotropy) -> CellHamiltonian:
    """Dense real-symmetric cell Hamiltonian (no multiplicity factor)."""
    if len(J.values) != geometry.n_bonds:
        raise ValueError(
            f"{len(J.values)} couplings for a geometry with {geometry.n_bonds} bonds"
        )
    stack = _bond_terms(geometry, aniso)
    j = np.array([float(v) for v in J.values])
    matrix = np.tensordot(j, stack, axes=1)
    return CellHamiltonian(geometry=geometry, anisotropy=aniso, couplings=J, matrix=matrix)


def _lowest_eig(matrix: np.ndarray) -> float:
    try:
        w, v = scipy.linalg.eigh(matrix, subset_by_index=(0, 0), driver="evr")
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed to converge: {exc}") from exc
    lam = float(w[0])
    vec = v[:, 0]
    residual = float(np.linalg.norm(matrix @ vec - lam * vec))
    scale = float(np.abs(matrix).sum(axis=1).max())
    if residual > 1e-10 * scale:
        raise EigensolverError(
            f"eigenpair residual {residual:.3e} exceeds 1e-10 * ||H|| = {1e-10 * scale:.3e}"
        )
    return lam


def ground_energy(ham: CellHamiltonian, *, full: bool = False) -> CellSpectrum:
    """Lowest eigenvalue (residual-checked); optionally the full spectrum."""
    if full:
        try:
            eigs = scipy.linalg.eigvalsh(ham.matrix)
        except scipy.linalg.LinAlgError as exc:
            raise EigensolverError(f"eigensolver failed to converge: {exc}") from exc
        lam = _lowest_eig(ham.matrix)
        return CellSpectrum(ground_energy=lam, eigenvalues=eigs)
    return CellSpectrum(ground_energy=_lowest_eig(ham.matrix))


def _config_energies(geometry, dist, aniso, lo, hi, stack):
    vals = [float(v) for v, _ in dist.atoms]
    n_atoms = len(dist.atoms)
    out = np.empty(hi - lo)
    j = np.empty(geometry.n_bonds)
    for c in range(lo, hi):
        rem = c
        for b in range(geometry.n_bonds):
            rem, a = divmod(rem, n_atoms)
            j[b] = vals[a]
        out[c - lo] = _lowest_eig(np.tensordot(j, stack, axes=1))
    return out


def quantum_cell_average(
    geometry, dist: CouplingDistribution, aniso: Anisotropy, *, threads: int = 1
) -> float:
    """Average ground eigenvalue over all discrete coupling configurations.

    Energies are accumulated by configuration index with exact probability
    weights, so the result is bit-identical for any thread count.
    """
    if dist.kind != "discrete":
        raise ValueError("quantum averaging requires a discrete distribution")
    n_bonds = geometry.n_bonds
    n_atoms = len(dist.atoms)
    n_configs = n_atoms**n_bonds
    if n_configs > _ENUM_GUARD:
        raise GuardError(
            f"{n_atoms}^{n_bonds} = {n_configs} coupling configurations "
            f"exceed the enumeration guard ({_ENUM_GUARD})"
        )
    stack = _bond_terms(geometry, aniso)
    energies = np.empty(n_configs)
    threads = max(1, int(threads))
    if threads == 1:
        energies[:] = _config_energies(geometry, dist, aniso, 0, n_configs, stack)
    else:
        step = -(-n_configs // (threads * 4))
        ranges = [(lo, min(lo + step, n_configs)) for lo in range(0, n_configs, step)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(
                lambda r: _config_energies(geometry, dist, aniso, r[0], r[1], stack),
                ranges,
            )
            for (lo, hi), part in zip(ranges, parts):
                energies[lo:hi] = part

    probs = [float(p) for _, p in dist.atoms]
    weights = np.empty(n_configs)
    for c in range(n_configs):
        rem = c
        w = 1.0
        for _ in range(n_bonds):
            rem, a = divmod(rem, n_atoms)
            w *= probs[a]
        weights[c] = w
    return math.fsum(weights[c] * energies[c] for c in range(n_configs))


def quantum_mc_average(
    geometry,
    dist: CouplingDistribution,
    aniso: Anisotropy,
    samples: int,
    *,
    threads: int = 1,
) -> tuple[float, float]:
    """Monte Carlo (mean, stderr) of the ground eigenvalue for sampled laws.

    Chunked substreams keyed by (seed, chunk index), reduced in chunk order:
    deterministic for any thread count.
    """
    from .bounds import _draw  # shared sampler dispatch

    if dist.kind != "sampled":
        raise ValueError("Monte Carlo averaging requires a sampled distribution")
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    stack = _bond_terms(geometry, aniso)

    def chunk_stats(c: int):
        lo = c * _MC_CHUNK
        count = min(_MC_CHUNK, samples - lo)
        rng = np.random.default_rng([dist.seed, c])
        draws = _draw(dist, rng, count, geometry.n_bonds)
        e = [_lowest_eig(np.tensordot(draws[s], stack, axes=1)) for s in range(count)]
        return math.fsum(e), math.fsum(x * x for x in e)

    n_chunks = -(-samples // _MC_CHUNK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(chunk_stats, range(n_chunks)))
    else:
        stats = [chunk_stats(c) for c in range(n_chunks)]
    s1 = math.fsum(s[0] for s in stats)
    s2 = math.fsum(s[1] for s in stats)
    mean = s1 / samples
    var = max(0.0, (s2 - samples * mean * mean) / (samples - 1))
    return mean, math.sqrt(var / samples)


@dataclass(frozen=True)
class SweepPoint:
    alpha_x: float
    lower_bound: float
    method: str
    stderr: float | None


def anisotropy_sweep(
    geometry,
    dist: CouplingDistribution,
    grid,
    *,
    samples: int = 20_000,
    threads: int = 1,
) -> tuple[SweepPoint, ...]:
    """Lower bound c_d x average versus alpha_x, at alpha_y = 0, alpha_z = 1.

    The grid must contain 0 so the classical endpoint anchors the sweep; no
    monotonicity in alpha_x is asserted.
    """
    grid = [float(a) for a in grid]
    if not grid:
        raise ValueError("empty anisotropy grid")
    if any(not math.isfinite(a) for a in grid):
        raise ValueError("grid values must be finite")
    if not any(a == 0.0 for a in grid):
        raise ValueError("grid must include 0 (classical anchor point)")
    mult = float(geometry.multiplicity_factor)
    points = []
    for a in grid:
        aniso = Anisotropy(a, 0.0, 1.0)
        if dist.kind == "discrete":
            avg = quantum_cell_average(geometry, dist, aniso, threads=threads)
            points.append(SweepPoint(a, mult * avg, "exact-couplings", None))
        else:
            mean, err = quantum_mc_average(geometry, dist, aniso, samples, threads=threads)
            points.append(SweepPoint(a, mult * mean, "monte-carlo", mult * err))
    return tuple(points)


@dataclass(frozen=True)
class GaugeCheckResult:
    passed: bool
    energy: float
    gauged_energy: float
    tolerance: float


def xz_gauge_check(
    geometry,
    J: CouplingAssignment,
    site: int,
    aniso: Anisotropy = XZ,
    *,
    tol: float = 1e-9,
) -> GaugeCheckResult:
    """Ground-energy invariance under flipping all couplings at one site.

    Conjugation by Y_site sends X -> -X and Z -> -Z there, which is the same
    as flipping the incident couplings; this needs alpha_y = 0.
    """
    if aniso.alpha_y != 0.0:
        raise ValueError("the gauge map requires alpha_y = 0 (XZ/XY case)")
    e0 = _lowest_eig(build_hamiltonian(geometry, J, aniso).matrix)
    e1 = _lowest_eig(
        build_hamiltonian(geometry, gauge_transform(geometry, J, site), aniso).matrix
    )
    return GaugeCheckResult(abs(e0 - e1) <= tol, e0, e1, tol)

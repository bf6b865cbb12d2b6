"""Classical Ising cells, exactly: energies, ground states, frustration, gauge maps.

All quantities are exact rationals (`fractions.Fraction`); ground states come
from exhaustive enumeration of spin configurations, with the hot loop in the
kernel backend.  No multiplicity factor is applied here; that happens when
cell averages are assembled into a lattice bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import _kernels as kernels
from .errors import GuardError
from .lattice import incident_bonds

_ENUM_SITE_LIMIT = 24  # 2**(n-1) table entries; cells have 4 or 8 sites


@dataclass(frozen=True)
class CouplingAssignment:
    """Exact rational coupling per bond, in the geometry's bond order."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_bitmask(cls, mask: int, n_bonds: int, scale=1) -> "CouplingAssignment":
        """Sign-pattern form: bit b set means bond b carries -scale."""
        j = Fraction(scale)
        if j <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        if mask < 0 or mask >> n_bonds:
            raise ValueError(f"mask {mask:#x} does not fit {n_bonds} bonds")
        return cls(tuple(-j if (mask >> b) & 1 else j for b in range(n_bonds)))

    def to_bitmask(self) -> tuple[int, Fraction]:
        """Inverse of from_bitmask: (mask, scale).  Errors unless all |J| match."""
        if not self.values:
            raise ValueError("empty assignment")
        scale = abs(self.values[0])
        mask = 0
        for b, v in enumerate(self.values):
            if v == 0 or abs(v) != scale:
                raise ValueError("couplings are not a common-magnitude sign pattern")
            if v < 0:
                mask |= 1 << b
        return mask, scale


@dataclass(frozen=True)
class SpinConfiguration:
    """One Ising spin (+1 or -1) per site."""

    spins: tuple[int, ...]

    def __post_init__(self):
        spins = tuple(int(s) for s in self.spins)
        if any(s not in (1, -1) for s in spins):
            raise ValueError("spins must be +1 or -1")
        object.__setattr__(self, "spins", spins)

    def __len__(self) -> int:
        return len(self.spins)

    @classmethod
    def from_bitmask(cls, mask: int, n_sites: int) -> "SpinConfiguration":
        """Bit k set means the spin at site k is -1."""
        if mask < 0 or mask >> n_sites:
            raise ValueError(f"mask {mask:#x} does not fit {n_sites} sites")
        return cls(tuple(-1 if (mask >> k) & 1 else 1 for k in range(n_sites)))

    def to_bitmask(self) -> int:
        mask = 0
        for k, s in enumerate(self.spins):
            if s == -1:
                mask |= 1 << k
        return mask

    def flipped(self) -> "SpinConfiguration":
        return SpinConfiguration(tuple(-s for s in self.spins))


@dataclass(frozen=True)
class FrustrationSignature:
    """Sign of the coupling product around each face; -1 marks frustration."""

    face_products: tuple[int, ...]

    @property
    def frustrated_count(self) -> int:
        return sum(1 for g in self.face_products if g == -1)


def _check_couplings(geometry, J: CouplingAssignment) -> None:
    if len(J.values) != len(geometry.bonds):
        raise ValueError(
            f"{len(J.values)} couplings for a geometry with {len(geometry.bonds)} bonds"
        )


def scaled_integers(values) -> tuple[list[int], int]:
    """Common-denominator integer form: values[b] == ints[b] / den."""
    den = math.lcm(*(v.denominator for v in values))
    return [int(v * den) for v in values], den


@lru_cache(maxsize=32)
def _antialign(geometry):
    return kernels.antialign_table(geometry.n_sites, geometry.bonds)


def antialign_table(geometry):
    """Cached per-spin-configuration masks of antialigned bonds."""
    if geometry.n_sites > _ENUM_SITE_LIMIT:
        raise GuardError(
            f"exhaustive cell enumeration guard: {geometry.n_sites} sites "
            f"(limit {_ENUM_SITE_LIMIT})"
        )
    return _antialign(geometry)


def cell_energy(geometry, J: CouplingAssignment, sigma: SpinConfiguration) -> Fraction:
    """Energy functional sum over bonds of J_ij s_i s_j, exactly."""
    _check_couplings(geometry, J)
    if len(sigma.spins) != geometry.n_sites:
        raise ValueError(f"{len(sigma.spins)} spins for {geometry.n_sites} sites")
    s = sigma.spins
    return sum(
        (v * (s[i] * s[j]) for v, (i, j) in zip(J.values, geometry.bonds)),
        start=Fraction(0),
    )


def cell_ground_state(geometry, J: CouplingAssignment):
    """Exact minimum of cell_energy over all spin configurations.

    Site 0 is pinned to +1 (global flip symmetry halves the scan); ties go to
    the smallest spin bitmask in that half-space.  Returns (energy, argmin).
    """
    _check_couplings(geometry, J)
    table = antialign_table(geometry)
    ints, den = scaled_integers(J.values)
    e, mask = kernels.cell_min_scaled(table, ints)
    return Fraction(e, den), SpinConfiguration.from_bitmask(mask, geometry.n_sites)


def frustration_signature(geometry, J: CouplingAssignment) -> FrustrationSignature:
    """Face products G_P; requires nonzero couplings (sign must be defined)."""
    _check_couplings(geometry, J)
    faces = getattr(geometry, "faces", None)
    if not faces:
        raise ValueError("geometry does not define faces")
    products = []
    for face in faces:
        g = 1
        for b in face:
            v = J.values[b]
            if v == 0:
                raise ValueError(f"bond {b} has zero coupling; its sign is undefined")
            if v < 0:
                g = -g
        products.append(g)
    return FrustrationSignature(tuple(products))


def frustration_census(geometry):
    """Sweep every +-1 sign pattern: ground-energy counts per frustrated-face count.

    Returns {frustrated_count: {energy: pattern_count}} with plain ints,
    ordered by frustrated_count.  Face parity comes from popcounts of the
    pattern mask against per-face bond masks, energies from the kernel sweep.
    """
    faces = getattr(geometry, "faces", None)
    if not faces:
        raise ValueError("geometry does not define faces")
    table = antialign_table(geometry)
    energies, _ = kernels.pm_minima(table, geometry.n_bonds)
    face_masks = [sum(1 << b for b in face) for face in faces]
    census: dict[int, dict[int, int]] = {}
    for mask, e in enumerate(energies):
        k = sum((mask & fm).bit_count() & 1 for fm in face_masks)
        row = census.setdefault(k, {})
        row[int(e)] = row.get(int(e), 0) + 1
    return {k: dict(sorted(census[k].items())) for k in sorted(census)}


def gauge_transform(geometry, J: CouplingAssignment, site: int) -> CouplingAssignment:
    """Flip the coupling on every bond incident to ``site``.

    The paired spin flip at ``site`` is implicit, so the energy spectrum and
    all face products are unchanged.  Works on cells and finite lattices.
    """
    flip = set(incident_bonds(geometry, site))
    return CouplingAssignment(
        tuple(-v if b in flip else v for b, v in enumerate(J.values))
    )

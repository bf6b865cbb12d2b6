"""Cell geometries, finite hypercubic lattices, and cell covers.

Conventions (fixed so bitmask encodings are reproducible across runs):

* sites are indexed row-major with x fastest: ``site = x + Lx*(y + Ly*z)``;
* bonds are ordered lexicographically by (anchor site index, axis x<y<z),
  each stored as ``(anchor, neighbor_in_positive_direction)``;
* cell faces are ordered by (normal axis x<y<z, coordinate 0<1) and store
  their four bond indices in cycle order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import GuardError

PERIODIC = "periodic"
FREE = "free"

_AXES = "xyz"

# Multiplicity factors removing the multiple counting of bonds when a
# periodic lattice is written as a sum of one anchored cell per site: every
# bond lies in 2 unit squares (d=2) or 4 unit cubes (d=3).
MULTIPLICITY = {2: Fraction(1, 2), 3: Fraction(1, 4)}


@dataclass(frozen=True)
class CellGeometry:
    """A unit square (d=2) or unit cube (d=3) with canonical orderings."""

    dimension: int
    sites: tuple[int, ...]
    site_offsets: tuple[tuple[int, ...], ...]
    bonds: tuple[tuple[int, int], ...]
    bond_axes: tuple[int, ...]
    faces: tuple[tuple[int, int, int, int], ...]
    multiplicity_factor: Fraction

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)


def _cell_bonds(dimension: int):
    offsets = [tuple(reversed(c)) for c in product((0, 1), repeat=dimension)]
    offsets.sort(key=lambda c: tuple(reversed(c)))  # row-major, x fastest
    index = {c: i for i, c in enumerate(offsets)}
    bonds = []
    axes = []
    for site, coord in enumerate(offsets):
        for axis in range(dimension):
            if coord[axis] == 0:
                nb = list(coord)
                nb[axis] = 1
                bonds.append((site, index[tuple(nb)]))
                axes.append(axis)
    return offsets, bonds, axes


def _cycle_order(face_bonds, bonds):
    """Order the four bonds of a plaquette so consecutive ones share a site."""
    remaining = list(face_bonds)
    cycle = [remaining.pop(0)]
    tail = bonds[cycle[0]][1]
    while remaining:
        for k in remaining:
            i, j = bonds[k]
            if tail in (i, j):
                cycle.append(k)
                tail = j if tail == i else i
                remaining.remove(k)
                break
        else:  # pragma: no cover - geometry is fixed
            raise AssertionError("face bonds do not close a cycle")
    return tuple(cycle)


def make_cell(dimension: int) -> CellGeometry:
    """Canonical unit cell: 4 sites/4 bonds/1 face (d=2) or 8/12/6 (d=3)."""
    if dimension not in (2, 3):
        raise ValueError(f"unsupported dimension {dimension}; expected 2 or 3")
    offsets, bonds, axes = _cell_bonds(dimension)
    faces = []
    if dimension == 2:
        faces.append(_cycle_order(range(len(bonds)), bonds))
    else:
        for axis in range(3):
            for c in (0, 1):
                fb = [
                    k
                    for k, (i, j) in enumerate(bonds)
                    if offsets[i][axis] == c and offsets[j][axis] == c
                ]
                faces.append(_cycle_order(fb, bonds))
    return CellGeometry(
        dimension=dimension,
        sites=tuple(range(len(offsets))),
        site_offsets=tuple(offsets),
        bonds=tuple(bonds),
        bond_axes=tuple(axes),
        faces=tuple(faces),
        multiplicity_factor=MULTIPLICITY[dimension],
    )


@dataclass(frozen=True)
class FiniteLattice:
    """Finite hypercubic lattice with nearest-neighbor bonds."""

    dimension: int
    side_lengths: tuple[int, ...]
    boundary: str
    bonds: tuple[tuple[int, int], ...]
    bond_axes: tuple[int, ...]
    _bond_index: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    @property
    def n_sites(self) -> int:
        n = 1
        for s in self.side_lengths:
            n *= s
        return n

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    def site_index(self, coords) -> int:
        idx = 0
        stride = 1
        for c, s in zip(coords, self.side_lengths):
            idx += (c % s) * stride
            stride *= s
        return idx

    def site_coords(self, index: int) -> tuple[int, ...]:
        coords = []
        for s in self.side_lengths:
            coords.append(index % s)
            index //= s
        return tuple(coords)

    def bond_index(self, i: int, j: int) -> int:
        return self._bond_index[(i, j) if i < j else (j, i)]


def make_lattice(dimension: int, side_lengths, boundary: str = PERIODIC) -> FiniteLattice:
    """Build the lattice with canonically ordered, deduplicated bonds."""
    if dimension not in (2, 3):
        raise ValueError(f"unsupported dimension {dimension}; expected 2 or 3")
    sides = tuple(int(s) for s in side_lengths)
    if len(sides) != dimension:
        raise ValueError(f"expected {dimension} side lengths, got {len(sides)}")
    if boundary not in (PERIODIC, FREE):
        raise ValueError(f"boundary must be '{PERIODIC}' or '{FREE}'")
    minimum = 3 if boundary == PERIODIC else 2
    if min(sides) < minimum:
        # at L=2 periodic wrap would create a doubled bond between one pair
        raise ValueError(
            f"side lengths must be >= {minimum} for {boundary} boundaries, got {sides}"
        )

    n_sites = 1
    for s in sides:
        n_sites *= s
    strides = []
    acc = 1
    for s in sides:
        strides.append(acc)
        acc *= s

    bonds = []
    axes = []
    for site in range(n_sites):
        coords = []
        rem = site
        for s in sides:
            coords.append(rem % s)
            rem //= s
        for axis in range(dimension):
            if coords[axis] + 1 < sides[axis]:
                bonds.append((site, site + strides[axis]))
            elif boundary == PERIODIC:
                bonds.append((site, site - (sides[axis] - 1) * strides[axis]))
            else:
                continue
            axes.append(axis)

    index = {}
    for k, (i, j) in enumerate(bonds):
        key = (i, j) if i < j else (j, i)
        if key in index:  # pragma: no cover - excluded by the L>=3 guard
            raise AssertionError(f"duplicate bond {key}")
        index[key] = k
    lat = FiniteLattice(
        dimension=dimension,
        side_lengths=sides,
        boundary=boundary,
        bonds=tuple(bonds),
        bond_axes=tuple(axes),
    )
    lat._bond_index.update(index)
    return lat


@dataclass(frozen=True)
class CellCover:
    """One cell anchored at every site of a periodic lattice.

    ``bond_maps[n][k]`` is the lattice bond index carrying cell bond ``k`` of
    the cell anchored at site ``n`` (the anchor is the cell corner with the
    smallest coordinates).  Summing ``multiplicity_factor`` over all cells
    containing a given lattice bond yields exactly 1.
    """

    lattice: FiniteLattice
    cell: CellGeometry
    bond_maps: tuple[tuple[int, ...], ...]


def make_cover(lattice: FiniteLattice) -> CellCover:
    if lattice.boundary != PERIODIC:
        raise ValueError("cell covers are defined for periodic lattices only")
    cell = make_cell(lattice.dimension)
    maps = []
    for anchor in range(lattice.n_sites):
        base = lattice.site_coords(anchor)
        sites = [
            lattice.site_index([b + o for b, o in zip(base, off)])
            for off in cell.site_offsets
        ]
        maps.append(
            tuple(lattice.bond_index(sites[i], sites[j]) for i, j in cell.bonds)
        )
    return CellCover(lattice=lattice, cell=cell, bond_maps=tuple(maps))


def incident_bonds(geometry, site: int) -> tuple[int, ...]:
    """Indices of the bonds touching ``site`` (works for cells and lattices)."""
    n = geometry.n_sites
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} sites")
    return tuple(k for k, (i, j) in enumerate(geometry.bonds) if site in (i, j))

import itertools
from fractions import Fraction

import pytest

from ea_bounds import (
    CouplingAssignment,
    GuardError,
    SpinConfiguration,
    cell_energy,
    cell_ground_state,
    frustration_census,
    frustration_signature,
    gauge_transform,
    make_lattice,
)
from ea_bounds.classical import antialign_table, scaled_integers
from ea_bounds.lattice import CellGeometry

from conftest import brute_force_ground


def test_coupling_bitmask_roundtrip():
    J = CouplingAssignment.from_bitmask(0b0110, 4)
    assert J.values == (1, -1, -1, 1)
    assert J.to_bitmask() == (0b0110, 1)
    scaled = CouplingAssignment.from_bitmask(0b0110, 4, scale=Fraction(3, 2))
    assert scaled.values == (Fraction(3, 2), Fraction(-3, 2), Fraction(-3, 2), Fraction(3, 2))
    assert scaled.to_bitmask() == (0b0110, Fraction(3, 2))
    with pytest.raises(ValueError):
        CouplingAssignment((1, 2, 1, 1)).to_bitmask()


def test_coupling_values_coerced_to_fractions():
    J = CouplingAssignment((1, Fraction(1, 2), -2, 0))
    assert all(isinstance(v, Fraction) for v in J.values)


def test_spin_bitmask_roundtrip():
    s = SpinConfiguration.from_bitmask(0b101, 3)
    assert s.spins == (-1, 1, -1)
    assert s.to_bitmask() == 0b101
    assert s.flipped().spins == (1, -1, 1)


def test_scaled_integers():
    ints, den = scaled_integers((Fraction(1, 2), Fraction(-1, 3), Fraction(2)))
    assert den == 6
    assert ints == [3, -2, 12]


def test_cell_energy_hand_values(square):
    # energy is sum(J * s_i * s_j): positive couplings favor antialignment
    plus = CouplingAssignment((1, 1, 1, 1))
    up = SpinConfiguration((1, 1, 1, 1))
    assert cell_energy(square, plus, up) == 4
    staggered = SpinConfiguration((1, -1, -1, 1))
    assert cell_energy(square, plus, staggered) == -4
    one_down = SpinConfiguration((1, 1, 1, -1))
    assert cell_energy(square, plus, one_down) == 0  # satisfies bonds 2 and 3 only


def test_square_ground_states(square):
    plus = CouplingAssignment((1, 1, 1, 1))
    e, s = cell_ground_state(square, plus)
    assert e == -4
    # unfrustrated: every bond satisfied (product -1 against positive J)
    assert all(s.spins[i] * s.spins[j] == -1 for i, j in square.bonds)
    frustrated = CouplingAssignment((-1, 1, 1, 1))
    e, s = cell_ground_state(square, frustrated)
    assert e == -2  # one bond must stay unsatisfied
    assert cell_energy(square, frustrated, s) == e


def test_cube_single_negative_bond(cube):
    # flipping any one bond of the all-plus cube frustrates its two incident
    # faces and costs exactly 2: the ground state absorbs the one bad bond
    for b in range(12):
        J = CouplingAssignment.from_bitmask(1 << b, 12)
        e, s = cell_ground_state(cube, J)
        assert e == -10
        assert cell_energy(cube, J, s) == e


def test_ground_state_matches_brute_force(square, cube):
    import random

    rng = random.Random(7)
    for geom in (square, cube):
        for _ in range(25):
            values = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in geom.bonds]
            J = CouplingAssignment(tuple(values))
            e, s = cell_ground_state(geom, J)
            ref, _ = brute_force_ground(geom.n_sites, geom.bonds, values)
            assert e == ref
            assert cell_energy(geom, J, s) == e


def test_ground_state_site0_pinned(square, cube):
    # reported minimizer uses the spin-flip symmetry to fix site 0 up
    for geom in (square, cube):
        for mask in (0, 1, 5):
            _, s = cell_ground_state(geom, CouplingAssignment.from_bitmask(mask, geom.n_bonds))
            assert s.spins[0] == 1


def test_antialign_table_guard():
    # a fabricated 25-site chain exceeds the enumeration budget
    sites = 25
    geom = CellGeometry(
        dimension=2,
        sites=tuple(range(sites)),
        site_offsets=tuple((k, 0) for k in range(sites)),
        bonds=tuple((k, k + 1) for k in range(sites - 1)),
        bond_axes=(0,) * (sites - 1),
        faces=(),
        multiplicity_factor=Fraction(1, 2),
    )
    with pytest.raises(GuardError):
        antialign_table(geom)


def test_frustration_signature(square):
    assert frustration_signature(square, CouplingAssignment((1, 1, 1, 1))).frustrated_count == 0
    assert frustration_signature(square, CouplingAssignment((-1, 1, 1, 1))).frustrated_count == 1
    # face product is invariant under gauge transforms
    J = CouplingAssignment((-1, 1, -1, 1))
    sig = frustration_signature(square, J)
    for site in range(4):
        assert frustration_signature(square, gauge_transform(square, J, site)).face_products == sig.face_products


def test_frustration_signature_rejects_zero(square):
    with pytest.raises(ValueError):
        frustration_signature(square, CouplingAssignment((0, 1, 1, 1)))


def test_square_census(square):
    census = frustration_census(square)
    assert census == {0: {Fraction(-4): 8}, 1: {Fraction(-2): 8}}


def test_cube_census(cube):
    census = frustration_census(cube)
    assert census == {
        0: {Fraction(-12): 128},
        2: {Fraction(-10): 1536, Fraction(-8): 384},
        4: {Fraction(-8): 1920},
        6: {Fraction(-6): 128},
    }
    assert sum(sum(v.values()) for v in census.values()) == 4096


def test_gauge_transform_invariance(square, cube):
    import random

    rng = random.Random(3)
    for geom in (square, cube):
        for _ in range(10):
            values = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in geom.bonds)
            J = CouplingAssignment(values)
            e0, _ = cell_ground_state(geom, J)
            for site in range(geom.n_sites):
                e1, _ = cell_ground_state(geom, gauge_transform(geom, J, site))
                assert e1 == e0


def test_gauge_transform_is_involution(square):
    J = CouplingAssignment((1, -1, 1, -1))
    assert gauge_transform(square, gauge_transform(square, J, 2), 2) == J


def test_gauge_transform_on_lattice():
    lat = make_lattice(2, (3, 3), "periodic")
    J = CouplingAssignment.from_bitmask(0b101010101, lat.n_bonds)
    g = gauge_transform(lat, J, 4)
    flipped = [b for b in range(lat.n_bonds) if g.values[b] != J.values[b]]
    assert len(flipped) == 4  # site degree on the periodic square lattice
    assert all(4 in lat.bonds[b] for b in flipped)

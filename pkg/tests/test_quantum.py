import math

import numpy as np
import pytest

from ea_bounds import (
    CLASSICAL,
    HEISENBERG,
    XZ,
    Anisotropy,
    CouplingAssignment,
    anisotropy_sweep,
    bernoulli,
    build_hamiltonian,
    cell_ground_state,
    gauge_transform,
    ground_energy,
    make_cell,
    quantum_cell_average,
    quantum_mc_average,
    sampled,
    xz_gauge_check,
)
from ea_bounds.lattice import CellGeometry
from fractions import Fraction


def _two_site_geometry():
    return CellGeometry(
        dimension=2,
        sites=(0, 1),
        site_offsets=((0, 0), (1, 0)),
        bonds=((0, 1),),
        bond_axes=(0,),
        faces=(),
        multiplicity_factor=Fraction(1, 2),
    )


def _numpy_ground(ham):
    # independent oracle: full symmetric diagonalization via LAPACK syevd
    return float(np.linalg.eigvalsh(ham.matrix)[0])


def test_anisotropy_validation():
    with pytest.raises(ValueError):
        Anisotropy(float("nan"), 0.0, 1.0)
    a = Anisotropy(0.5, 0.0, 1.0)
    assert (a.alpha_x, a.alpha_y, a.alpha_z) == (0.5, 0.0, 1.0)


def test_hamiltonian_is_real_symmetric():
    cube = make_cell(3)
    J = CouplingAssignment.from_bitmask(0b101001010011, 12)
    for aniso in (CLASSICAL, XZ, HEISENBERG):
        h = build_hamiltonian(cube, J, aniso)
        assert h.matrix.dtype == np.float64
        assert h.matrix.shape == (256, 256)
        assert np.array_equal(h.matrix, h.matrix.T)


def test_two_site_heisenberg_spectrum():
    # J (XX+YY+ZZ) on two sites: singlet at -3J, triplet at +J
    geom = _two_site_geometry()
    h = build_hamiltonian(geom, CouplingAssignment((1,)), HEISENBERG)
    spec = np.linalg.eigvalsh(h.matrix)
    assert np.allclose(spec, [-3.0, 1.0, 1.0, 1.0], atol=1e-12)


def test_ground_energy_matches_numpy_oracle():
    rng = np.random.default_rng(8)
    square = make_cell(2)
    for _ in range(10):
        J = CouplingAssignment(tuple(Fraction(int(v)) for v in rng.integers(-3, 4, size=4)))
        aniso = Anisotropy(float(rng.uniform(0, 1)), float(rng.uniform(0, 1)), 1.0)
        h = build_hamiltonian(square, J, aniso)
        spec = ground_energy(h)
        assert math.isclose(spec.ground_energy, _numpy_ground(h), abs_tol=1e-10)


def test_full_spectrum_option():
    square = make_cell(2)
    h = build_hamiltonian(square, CouplingAssignment((1, 1, 1, 1)), XZ)
    spec = ground_energy(h, full=True)
    assert spec.eigenvalues is not None
    assert len(spec.eigenvalues) == 16
    assert math.isclose(spec.eigenvalues[0], spec.ground_energy, abs_tol=1e-12)
    assert np.allclose(spec.eigenvalues, np.linalg.eigvalsh(h.matrix), atol=1e-10)


def test_classical_limit_matches_classical_exactly():
    # with anisotropy (0,0,1) the matrix is diagonal in the spin basis, so the
    # lowest eigenvalue equals the combinatorial ground energy
    square = make_cell(2)
    for mask in range(16):
        J = CouplingAssignment.from_bitmask(mask, 4)
        h = build_hamiltonian(square, J, CLASSICAL)
        e_classical, _ = cell_ground_state(square, J)
        assert abs(ground_energy(h).ground_energy - float(e_classical)) <= 1e-9


def test_heisenberg_plaquette_ground():
    # antiferromagnetic Heisenberg square: E0 = -8 for the 4-site plaquette
    square = make_cell(2)
    h = build_hamiltonian(square, CouplingAssignment((1, 1, 1, 1)), HEISENBERG)
    assert math.isclose(ground_energy(h).ground_energy, -8.0, abs_tol=1e-9)


def test_quantum_average_classical_limit(square):
    avg = quantum_cell_average(square, bernoulli(1), CLASSICAL)
    assert abs(avg - (-3.0)) <= 1e-9


def test_quantum_average_thread_invariant():
    square = make_cell(2)
    a = quantum_cell_average(square, bernoulli(1), XZ, threads=1)
    b = quantum_cell_average(square, bernoulli(1), XZ, threads=4)
    assert a == b  # bit-identical ordered reduction


def test_anisotropy_sweep_exact():
    square = make_cell(2)
    pts = anisotropy_sweep(square, bernoulli(1), (0.0, 0.5, 1.0))
    assert [p.alpha_x for p in pts] == [0.0, 0.5, 1.0]
    assert all(p.method == "exact-couplings" for p in pts)
    assert all(p.stderr is None for p in pts)
    assert abs(pts[0].lower_bound - (-1.5)) <= 1e-9
    # XZ couplings only deepen the bound on this grid
    assert pts[0].lower_bound > pts[1].lower_bound > pts[2].lower_bound


def test_anisotropy_sweep_matches_numpy_oracle():
    square = make_cell(2)
    pts = anisotropy_sweep(square, bernoulli(1), (0.0, 0.7))
    for p in pts:
        aniso = Anisotropy(p.alpha_x, 0.0, 1.0)
        total = 0.0
        for mask in range(16):
            J = CouplingAssignment.from_bitmask(mask, 4)
            total += _numpy_ground(build_hamiltonian(square, J, aniso))
        expected = 0.5 * total / 16
        assert math.isclose(p.lower_bound, expected, abs_tol=1e-9)


def test_anisotropy_sweep_requires_anchor():
    with pytest.raises(ValueError):
        anisotropy_sweep(make_cell(2), bernoulli(1), (0.5, 1.0))


def test_anisotropy_sweep_mc():
    square = make_cell(2)
    pts = anisotropy_sweep(square, sampled("bernoulli", seed=3), (0.0, 0.5), samples=2_000)
    assert all(p.method == "monte-carlo" for p in pts)
    assert all(p.stderr is not None and p.stderr > 0 for p in pts)
    assert abs(pts[0].lower_bound - (-1.5)) < 5 * pts[0].stderr


def test_quantum_mc_deterministic():
    square = make_cell(2)
    dist = sampled("normal", seed=21)
    a = quantum_mc_average(square, dist, XZ, 1_000, threads=1)
    b = quantum_mc_average(square, dist, XZ, 1_000, threads=4)
    assert a == b


def test_xz_gauge_check():
    square = make_cell(2)
    J = CouplingAssignment((1, -1, 1, 1))
    res = xz_gauge_check(square, J, site=2)
    assert res.passed
    assert abs(res.energy - res.gauged_energy) <= res.tolerance


def test_xz_gauge_check_rejects_alpha_y():
    with pytest.raises(ValueError):
        xz_gauge_check(make_cell(2), CouplingAssignment((1, 1, 1, 1)), site=0,
                       aniso=Anisotropy(1.0, 0.5, 1.0))


def test_xz_spectrum_gauge_invariant():
    # the full spectrum, not just the ground state, survives the gauge flip
    square = make_cell(2)
    rng = np.random.default_rng(17)
    for _ in range(20):
        mask = int(rng.integers(0, 16))
        site = int(rng.integers(0, 4))
        J = CouplingAssignment.from_bitmask(mask, 4)
        h0 = build_hamiltonian(square, J, XZ)
        h1 = build_hamiltonian(square, gauge_transform(square, J, site), XZ)
        s0 = np.linalg.eigvalsh(h0.matrix)
        s1 = np.linalg.eigvalsh(h1.matrix)
        assert np.max(np.abs(s0 - s1)) <= 1e-9

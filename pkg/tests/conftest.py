"""Shared fixtures and independent oracles.

The brute-force routines here deliberately avoid the package's kernels so
that tests compare two unrelated implementations.
"""

from fractions import Fraction

import pytest

from ea_bounds import make_cell


def brute_force_ground(n_sites, bonds, values):
    """Reference minimizer: try every spin assignment, O(2^n * n_bonds)."""
    best = None
    best_state = None
    for state in range(1 << n_sites):
        spins = [1 - 2 * ((state >> k) & 1) for k in range(n_sites)]
        e = sum(v * spins[i] * spins[j] for v, (i, j) in zip(values, bonds))
        if best is None or e < best:
            best, best_state = e, state
    return best, best_state


def brute_force_pm_average(geometry):
    """Average ground energy over all +-1 coupling patterns, exact."""
    total = 0
    n = geometry.n_bonds
    for mask in range(1 << n):
        values = [-1 if (mask >> b) & 1 else 1 for b in range(n)]
        e, _ = brute_force_ground(geometry.n_sites, geometry.bonds, values)
        total += e
    return Fraction(total, 1 << n)


@pytest.fixture(scope="session")
def square():
    return make_cell(2)


@pytest.fixture(scope="session")
def cube():
    return make_cell(3)

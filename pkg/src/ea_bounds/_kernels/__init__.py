"""Kernel backend selection and dispatch.

The hot integer loops (cell sweeps, the 2D row DP, Gray-code exhaustive
enumeration) have two interchangeable implementations:

* ``_core`` — Cython extension, int64 arithmetic;
* ``_pure`` — pure Python, arbitrary precision.

The compiled backend is used when importable; set ``EA_BOUNDS_BACKEND=pure``
to force the fallback.  Inputs whose scaled couplings could overflow int64
are routed to the pure backend regardless of the active one, so results are
always exact.  Both backends return identical values, including argmin
tie-breaks; ``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import GuardError
from . import _pure

try:
    from . import _core
except ImportError:  # pragma: no cover - depends on the build
    _core = None

_env = os.environ.get("EA_BOUNDS_BACKEND", "auto").lower()
if _env == "pure":
    _impl = _pure
elif _env == "compiled":
    if _core is None:
        raise ImportError("EA_BOUNDS_BACKEND=compiled but the extension is not built")
    _impl = _core
elif _env in ("", "auto"):
    _impl = _core if _core is not None else _pure
else:
    raise ValueError(f"unrecognized EA_BOUNDS_BACKEND={_env!r}")

BACKEND = "compiled" if _impl is _core else "pure"

# int64 headroom for the compiled paths: |energy| stays below sum|J| times a
# small constant, and the DP adds on top of a 2**62 sentinel.
_INT64_SAFE = 1 << 58

_SWEEP_MASK_LIMIT = 24  # 2**24 int64 energies ~ 134 MB; cells use 4 or 12


def backend_name() -> str:
    return BACKEND


def _pure_table(table):
    if isinstance(table, list):
        return table
    return [int(t) for t in table]


def antialign_table(n_sites: int, bonds):
    """Antialigned-bond masks for all spin configurations with site 0 at +1."""
    if len(bonds) > 62:
        raise GuardError("bond masks limited to 62 bonds")
    return _impl.antialign_table(n_sites, list(bonds))


def pm_minima(table, n_bonds: int):
    """Ground energies (units of J) and argmins over all 2**n_bonds sign masks."""
    if n_bonds > _SWEEP_MASK_LIMIT:
        raise GuardError(
            f"full +-J sweep over 2**{n_bonds} coupling masks exceeds the guard "
            f"(limit 2**{_SWEEP_MASK_LIMIT})"
        )
    energies, argmins = _impl.pm_minima(table, n_bonds)
    return np.asarray(energies, dtype=np.int64), np.asarray(argmins, dtype=np.int64)


def pm_min_single(table, n_bonds: int, mask: int):
    e, a = _impl.pm_min_single(table, n_bonds, int(mask))
    return int(e), int(a)


def cell_min_scaled(table, j_scaled):
    j = [int(v) for v in j_scaled]
    if _impl is not _pure and sum(abs(v) for v in j) <= _INT64_SAFE:
        e, a = _impl.cell_min_scaled(table, j)
    else:
        e, a = _pure.cell_min_scaled(_pure_table(table), j)
    return int(e), int(a)


def dp2d_ground(width: int, height: int, jh, jv, periodic: bool):
    jh = [[int(v) for v in row] for row in jh]
    jv = [[int(v) for v in row] for row in jv]
    total = sum(abs(v) for row in jh for v in row)
    total += sum(abs(v) for row in jv for v in row)
    if _impl is not _pure and total <= _INT64_SAFE:
        e, m = _impl.dp2d_ground(width, height, jh, jv, periodic)
    else:
        e, m = _pure.dp2d_ground(width, height, jh, jv, periodic)
    return int(e), int(m)


def exhaustive_ground(n_sites: int, bonds, j_scaled):
    j = [int(v) for v in j_scaled]
    if _impl is not _pure and sum(abs(v) for v in j) <= _INT64_SAFE:
        e, m = _impl.exhaustive_ground(n_sites, list(bonds), j)
    else:
        e, m = _pure.exhaustive_ground(n_sites, list(bonds), j)
    return int(e), int(m)

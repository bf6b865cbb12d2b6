"""Coupling distributions, exact disorder averages of cell ground states, and
assembly of the cell-decomposition lower bound on the energy per site.

The rigorous chain is: for a centered coupling distribution, the quenched
ground-state energy per site of the infinite lattice is bounded below by
``multiplicity_factor x Av(cell ground-state energy)``.  Discrete
distributions are averaged by exact enumeration over all coupling
configurations (rational arithmetic end to end); continuous ones get a
seeded Monte Carlo estimate that is clearly labeled non-rigorous.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels as kernels
from . import __version__
from .classical import antialign_table, scaled_integers
from .errors import GuardError, NonCenteredError
from .lattice import CellGeometry, make_cell

_ENUM_GUARD = 10**8
_MC_CHUNK = 4096

# ground-state energy per site of the unfrustrated (all-ferromagnetic)
# reference: d bonds per site, each contributing -1
IDEAL_ENERGY = {2: Fraction(-2), 3: Fraction(-3)}

EXACT = "exact-enumeration"
MONTE_CARLO = "monte-carlo"

NOTE_MC = "monte-carlo estimate, not a rigorous bound"
NOTE_NONCENTERED = (
    "couplings are not centered; the rigorous bound assumes a mean-zero "
    "distribution, value reported outside that hypothesis"
)
# the exact d=3 value is -141/64 = -2.203125; a circulated decimal rendering
# -2.204... is rounded inconsistently with the exact fraction
NOTE_D3_DECIMAL = (
    "exact value -141/64 = -2.203125; the often-quoted decimal -2.204... is "
    "inconsistent with the exact fraction"
)


@dataclass(frozen=True)
class CouplingDistribution:
    """Bond coupling law: finitely many rational atoms, or a named sampler."""

    kind: str  # "discrete" | "sampled"
    label: str
    atoms: tuple[tuple[Fraction, Fraction], ...] = ()
    sampler: str = ""
    params: tuple[tuple[str, float], ...] = ()
    seed: int = 0
    centered: bool = True

    def param(self, name: str) -> float:
        return dict(self.params)[name]

    @property
    def mean(self) -> Fraction:
        if self.kind != "discrete":
            raise ValueError("exact mean is defined for discrete distributions only")
        return sum((v * p for v, p in self.atoms), start=Fraction(0))


def discrete(atoms, *, allow_noncentered: bool = False) -> CouplingDistribution:
    """Distribution from (value, probability) pairs; probabilities must sum to 1."""
    pairs = tuple((Fraction(v), Fraction(p)) for v, p in atoms)
    if not pairs:
        raise ValueError("no atoms")
    if any(p <= 0 for _, p in pairs):
        raise ValueError("probabilities must be positive")
    total = sum(p for _, p in pairs)
    if total != 1:
        raise ValueError(f"probabilities sum to {total}, not 1")
    if len({v for v, _ in pairs}) != len(pairs):
        raise ValueError("duplicate atom values")
    mean = sum((v * p for v, p in pairs), start=Fraction(0))
    if mean != 0 and not allow_noncentered:
        raise NonCenteredError(
            f"distribution mean is {mean}, not 0; pass allow_noncentered to "
            "compute outside the mean-zero assumption"
        )
    label = "discrete(" + ", ".join(f"{v}:{p}" for v, p in pairs) + ")"
    return CouplingDistribution(
        kind="discrete", label=label, atoms=pairs, centered=(mean == 0)
    )


def bernoulli(J) -> CouplingDistribution:
    """Symmetric two-atom law: +J and -J with probability 1/2 each."""
    j = Fraction(J)
    if j <= 0:
        raise ValueError(f"J must be positive, got {J}")
    dist = discrete([(j, Fraction(1, 2)), (-j, Fraction(1, 2))])
    return CouplingDistribution(
        kind="discrete", label=f"bernoulli(J={j})", atoms=dist.atoms, centered=True
    )


_SAMPLERS = {"normal", "bernoulli", "point"}


def sampled(
    name: str, seed: int = 0, *, allow_noncentered: bool = False, **params
) -> CouplingDistribution:
    """Named i.i.d. sampler for Monte Carlo averaging.

    normal(scale), bernoulli(scale), point(value).  Only the point mass can
    be non-centered, and then only with ``allow_noncentered``.
    """
    if name not in _SAMPLERS:
        raise ValueError(f"unknown sampler {name!r}; choose from {sorted(_SAMPLERS)}")
    p = dict(params)
    if name in ("normal", "bernoulli"):
        scale = float(p.pop("scale", 1.0))
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        centered = True
        kept = {"scale": scale}
    else:
        if "value" not in p:
            raise ValueError("point sampler needs value=")
        value = float(p.pop("value"))
        centered = value == 0.0
        kept = {"value": value}
    if p:
        raise ValueError(f"unexpected sampler parameters {sorted(p)}")
    if not centered and not allow_noncentered:
        raise NonCenteredError(
            f"sampler {name} with {kept} is not centered; pass allow_noncentered "
            "to compute outside the mean-zero assumption"
        )
    label = name + "(" + ", ".join(f"{k}={v:g}" for k, v in sorted(kept.items())) + f", seed={seed})"
    return CouplingDistribution(
        kind="sampled",
        label=label,
        sampler=name,
        params=tuple(sorted(kept.items())),
        seed=int(seed),
        centered=centered,
    )


def parse_distribution_table(text: str, *, allow_noncentered: bool = False) -> CouplingDistribution:
    """Parse lines of ``value probability`` (exact fractions, # comments)."""
    atoms = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {n}: expected 'value probability', got {raw!r}")
        try:
            atoms.append((Fraction(parts[0]), Fraction(parts[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {n}: {exc}") from exc
    return discrete(atoms, allow_noncentered=allow_noncentered)


def _symmetric_pm_scale(dist: CouplingDistribution):
    """The J of a {+J: 1/2, -J: 1/2} law, else None (enables the ±J fast path)."""
    if dist.kind != "discrete" or len(dist.atoms) != 2:
        return None
    (v1, p1), (v2, p2) = dist.atoms
    if p1 == p2 == Fraction(1, 2) and v1 == -v2 and v1 != 0:
        return abs(v1)
    return None


def _chunk_ranges(total: int, chunks: int):
    chunks = max(1, min(int(chunks), total))
    step = -(-total // chunks)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def exact_cell_average(
    geometry: CellGeometry, dist: CouplingDistribution, *, chunks: int = 1
) -> Fraction:
    """Av of the cell ground-state energy: exact sum over all coupling configs.

    Partial sums over configuration ranges are integers combined in index
    order, so any chunking reproduces the single-pass result bit for bit.
    """
    if dist.kind != "discrete":
        raise ValueError("exact averaging requires a discrete distribution")
    n_bonds = geometry.n_bonds
    n_configs = len(dist.atoms) ** n_bonds
    if n_configs > _ENUM_GUARD:
        raise GuardError(
            f"{len(dist.atoms)}^{n_bonds} = {n_configs} coupling configurations "
            f"exceed the enumeration guard ({_ENUM_GUARD})"
        )
    table = antialign_table(geometry)

    scale = _symmetric_pm_scale(dist)
    if scale is not None:
        # integer fast path: energies in units of J over all sign bitmasks
        energies, _ = kernels.pm_minima(table, n_bonds)
        total = sum(int(energies[lo:hi].sum()) for lo, hi in _chunk_ranges(n_configs, chunks))
        return Fraction(total, n_configs) * scale

    vals, dv = scaled_integers([v for v, _ in dist.atoms])
    dp = math.lcm(*(p.denominator for _, p in dist.atoms))
    pnum = [int(p * dp) for _, p in dist.atoms]
    n_atoms = len(dist.atoms)

    def partial(lo, hi):
        acc = 0
        for c in range(lo, hi):
            rem = c
            j_scaled = []
            pw = 1
            for _ in range(n_bonds):
                rem, a = divmod(rem, n_atoms)
                j_scaled.append(vals[a])
                pw *= pnum[a]
            e, _ = kernels.cell_min_scaled(table, j_scaled)
            acc += pw * e
        return acc

    num = sum(partial(lo, hi) for lo, hi in _chunk_ranges(n_configs, chunks))
    return Fraction(num, dp**n_bonds * dv)


def _sign_matrix(table, n_bonds: int) -> np.ndarray:
    tab = np.asarray([int(t) for t in table], dtype=np.int64)
    bits = (tab[None, :] >> np.arange(n_bonds, dtype=np.int64)[:, None]) & 1
    return (1 - 2 * bits).astype(np.float64)


def _draw(dist: CouplingDistribution, rng, count: int, n_bonds: int) -> np.ndarray:
    if dist.sampler == "normal":
        return rng.normal(0.0, dist.param("scale"), size=(count, n_bonds))
    if dist.sampler == "bernoulli":
        signs = 1 - 2 * rng.integers(0, 2, size=(count, n_bonds))
        return dist.param("scale") * signs.astype(np.float64)
    return np.full((count, n_bonds), dist.param("value"))


def mc_cell_average(
    geometry: CellGeometry,
    dist: CouplingDistribution,
    samples: int,
    *,
    threads: int = 1,
) -> tuple[float, float]:
    """Monte Carlo (mean, stderr) of the cell ground-state energy.

    Sample chunks use independent substreams keyed by (seed, chunk index) and
    are reduced in chunk order, so results are identical for any thread count.
    """
    if dist.kind != "sampled":
        raise ValueError("Monte Carlo averaging requires a sampled distribution")
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    table = antialign_table(geometry)
    signs = _sign_matrix(table, geometry.n_bonds)

    def chunk_stats(c: int):
        lo = c * _MC_CHUNK
        count = min(_MC_CHUNK, samples - lo)
        rng = np.random.default_rng([dist.seed, c])
        draws = _draw(dist, rng, count, geometry.n_bonds)
        e = (draws @ signs).min(axis=1)
        return float(e.sum()), float((e * e).sum())

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
class ComparisonConstant:
    """Literature value shown next to computed bounds; never used in math."""

    label: str
    value: float
    role: str  # "upper" | "lower" | "heuristic-lower" | "estimate"
    source: str


_COMPARISON = {
    2: (
        ComparisonConstant(
            "finite-lattice exact GS (upper bound)",
            -1.39,
            "upper",
            "De Simone et al., branch-and-bound ground states of 2D +-J lattices",
        ),
        ComparisonConstant(
            "random-energy-model bound",
            -1.560,
            "lower",
            "Derrida, random-energy-model analysis",
        ),
        ComparisonConstant(
            "Monte Carlo estimate",
            -1.4,
            "estimate",
            "Binder, review of spin-glass simulations",
        ),
    ),
    3: (
        ComparisonConstant(
            "finite-lattice exact GS (upper bound)",
            -1.759,
            "upper",
            "branch-and-bound ground state of a 5x5x5 +-J lattice",
        ),
        ComparisonConstant(
            "random-energy-model bound",
            -1.956,
            "lower",
            "Derrida, random-energy-model analysis",
        ),
        ComparisonConstant(
            "minimal-covering-surface heuristic",
            -2.25,
            "heuristic-lower",
            "Kirkpatrick, string/surface counting argument",
        ),
        ComparisonConstant(
            "Monte Carlo estimate",
            -1.9,
            "estimate",
            "Binder, review of spin-glass simulations",
        ),
    ),
}


def comparison_table(dimension: int) -> tuple[ComparisonConstant, ...]:
    """Fixed literature constants for the given dimension (report-only)."""
    try:
        return _COMPARISON[dimension]
    except KeyError:
        raise ValueError(f"unsupported dimension {dimension}; expected 2 or 3") from None


def misfit_lower_bound(lower_bound, e_ideal_per_site) -> Fraction:
    """Relative energy deficit (|E_ideal| - |bound|) / |E_ideal|.

    Since |bound| >= |E_0| per site, this lower-bounds the true misfit of the
    frustrated ground state against the unfrustrated reference.
    """
    e = Fraction(e_ideal_per_site)
    if e == 0:
        raise ValueError("ideal reference energy must be nonzero")
    if e > 0:
        raise ValueError("ideal reference energy must be negative")
    return (abs(e) - abs(Fraction(lower_bound))) / abs(e)


@dataclass(frozen=True)
class BoundReport:
    """Everything needed to state the per-site lower bound reproducibly."""

    dimension: int
    distribution: str
    method: str  # EXACT | MONTE_CARLO
    cell_average: object  # Fraction (exact) or float (monte carlo)
    lower_bound: object
    decimal: str
    multiplicity: Fraction
    ideal_energy: Fraction
    misfit_bound: object
    comparison_constants: tuple[ComparisonConstant, ...]
    enumeration: tuple[int, Fraction] | None = None  # (configs, exact energy sum)
    mc_stderr: float | None = None
    samples: int | None = None
    notes: tuple[str, ...] = ()


def lower_bound(
    geometry,
    dist: CouplingDistribution,
    method: str = "auto",
    *,
    samples: int = 100_000,
    precision: int = 6,
    chunks: int = 1,
    threads: int = 1,
) -> BoundReport:
    """Per-site lower bound c_d x Av(cell GS energy), packaged as a report."""
    if isinstance(geometry, int):
        geometry = make_cell(geometry)
    if method == "auto":
        method = EXACT if dist.kind == "discrete" else MONTE_CARLO
    if method not in (EXACT, MONTE_CARLO):
        raise ValueError(f"unknown method {method!r}")
    dim = geometry.dimension
    mult = geometry.multiplicity_factor
    ideal = IDEAL_ENERGY[dim]
    constants = comparison_table(dim)
    notes: list[str] = []
    if not dist.centered:
        notes.append(NOTE_NONCENTERED)

    if method == EXACT:
        avg = exact_cell_average(geometry, dist, chunks=chunks)
        lb = mult * avg
        configs = len(dist.atoms) ** geometry.n_bonds
        enumeration = None
        if len({p for _, p in dist.atoms}) == 1:  # uniform: enumeration form exact
            enumeration = (configs, avg * configs)
        if lb == Fraction(-141, 64):
            notes.append(NOTE_D3_DECIMAL)
        return BoundReport(
            dimension=dim,
            distribution=dist.label,
            method=EXACT,
            cell_average=avg,
            lower_bound=lb,
            decimal=decimal_string(lb, precision),
            multiplicity=mult,
            ideal_energy=ideal,
            misfit_bound=misfit_lower_bound(lb, ideal),
            comparison_constants=constants,
            enumeration=enumeration,
            notes=tuple(notes),
        )

    mean, stderr = mc_cell_average(geometry, dist, samples, threads=threads)
    lb = float(mult) * mean
    lb_err = float(mult) * stderr
    notes.append(NOTE_MC)
    misfit = (abs(float(ideal)) - abs(lb)) / abs(float(ideal))
    return BoundReport(
        dimension=dim,
        distribution=dist.label,
        method=MONTE_CARLO,
        cell_average=mean,
        lower_bound=lb,
        decimal=decimal_string(lb, precision),
        multiplicity=mult,
        ideal_energy=ideal,
        misfit_bound=misfit,
        comparison_constants=constants,
        mc_stderr=lb_err,
        samples=samples,
        notes=tuple(notes),
    )


def _round_half_even(fr: Fraction) -> int:
    q, r = divmod(fr.numerator, fr.denominator)
    rem = Fraction(r, fr.denominator)
    half = Fraction(1, 2)
    if rem > half or (rem == half and q % 2):
        q += 1
    return q


def decimal_string(value, precision: int = 6) -> str:
    """Decimal rendering, round-half-even, trailing zeros trimmed."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if isinstance(value, float):
        out = f"{value:.{precision}f}"
    else:
        fr = Fraction(value)
        scaled = _round_half_even(fr * 10**precision)
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled)).rjust(precision + 1, "0")
        out = f"{sign}{digits[:-precision]}.{digits[-precision:]}"
    out = out.rstrip("0").rstrip(".")
    return out if out not in ("", "-") else "0"


def fraction_json(fr: Fraction) -> dict:
    return {"num": fr.numerator, "den": fr.denominator}


def _number_json(value, precision: int):
    if isinstance(value, Fraction):
        d = fraction_json(value)
        d["decimal"] = decimal_string(value, precision)
        return d
    return value


def report_json(report: BoundReport, precision: int = 6) -> dict:
    """Schema ea-bounds/1 rendering; exact fractions as {num, den} pairs."""
    out = {
        "schema": "ea-bounds/1",
        "version": __version__,
        "kind": "bound-report",
        "dimension": report.dimension,
        "distribution": report.distribution,
        "method": report.method,
        "cell_average": _number_json(report.cell_average, precision),
        "lower_bound": _number_json(report.lower_bound, precision),
        "decimal": report.decimal,
        "multiplicity_factor": fraction_json(report.multiplicity),
        "ideal_energy_per_site": fraction_json(report.ideal_energy),
        "misfit_bound": _number_json(report.misfit_bound, precision),
        "comparison_constants": [
            {"label": c.label, "value": c.value, "role": c.role, "source": c.source}
            for c in report.comparison_constants
        ],
        "notes": list(report.notes),
    }
    if report.enumeration is not None:
        configs, esum = report.enumeration
        out["enumeration"] = {"configs": configs, "energy_sum": fraction_json(esum)}
    if report.method == MONTE_CARLO:
        out["mc_stderr"] = report.mc_stderr
        out["samples"] = report.samples
    return out

"""Rigorous cell-based bounds on ground-state energy densities of short-range
Ising spin glasses, classical and quantum, with exact rational arithmetic."""

__version__ = "0.1.0"

# __version__ must be bound before the submodules import it back
from .errors import EigensolverError, GuardError, NonCenteredError
from .lattice import (
    FREE,
    PERIODIC,
    CellCover,
    CellGeometry,
    FiniteLattice,
    incident_bonds,
    make_cell,
    make_cover,
    make_lattice,
)
from .classical import (
    CouplingAssignment,
    FrustrationSignature,
    SpinConfiguration,
    cell_energy,
    cell_ground_state,
    frustration_census,
    frustration_signature,
    gauge_transform,
)
from .bounds import (
    BoundReport,
    ComparisonConstant,
    CouplingDistribution,
    bernoulli,
    comparison_table,
    decimal_string,
    discrete,
    exact_cell_average,
    lower_bound,
    mc_cell_average,
    misfit_lower_bound,
    parse_distribution_table,
    report_json,
    sampled,
)
from .quantum import (
    CLASSICAL,
    HEISENBERG,
    XZ,
    Anisotropy,
    CellHamiltonian,
    CellSpectrum,
    SweepPoint,
    anisotropy_sweep,
    build_hamiltonian,
    ground_energy,
    quantum_cell_average,
    quantum_mc_average,
    xz_gauge_check,
)
from .exact_gs import (
    LatticeInstance,
    CellInequalityReport,
    UpperBoundEstimate,
    draw_instance,
    exact_ground_state,
    sample_upper_bound,
    solve_samples,
    verify_cell_inequality_sample,
)
from ._kernels import backend_name

__all__ = [
    "__version__",
    "EigensolverError",
    "GuardError",
    "NonCenteredError",
    "FREE",
    "PERIODIC",
    "CellCover",
    "CellGeometry",
    "FiniteLattice",
    "incident_bonds",
    "make_cell",
    "make_cover",
    "make_lattice",
    "CouplingAssignment",
    "FrustrationSignature",
    "SpinConfiguration",
    "cell_energy",
    "cell_ground_state",
    "frustration_census",
    "frustration_signature",
    "gauge_transform",
    "BoundReport",
    "ComparisonConstant",
    "CouplingDistribution",
    "bernoulli",
    "comparison_table",
    "decimal_string",
    "discrete",
    "exact_cell_average",
    "lower_bound",
    "mc_cell_average",
    "misfit_lower_bound",
    "parse_distribution_table",
    "report_json",
    "sampled",
    "CLASSICAL",
    "HEISENBERG",
    "XZ",
    "Anisotropy",
    "CellHamiltonian",
    "CellSpectrum",
    "SweepPoint",
    "anisotropy_sweep",
    "build_hamiltonian",
    "ground_energy",
    "quantum_cell_average",
    "quantum_mc_average",
    "xz_gauge_check",
    "LatticeInstance",
    "CellInequalityReport",
    "UpperBoundEstimate",
    "draw_instance",
    "exact_ground_state",
    "sample_upper_bound",
    "solve_samples",
    "verify_cell_inequality_sample",
    "backend_name",
]

"""Phase-damped Jaynes-Cummings dynamics from Bell-mixture initial states.

Closed-form block evolution, entropy and correlation functionals, a
concurrence lower bound, resummed collapse-revival asymptotics, and an
independent brute-force master-equation integrator, plus a CSV-emitting
scenario runner.
"""

from .cli import CATALOG, COLUMNS, Curve, Scenario, TimeSeries, emit_csv, run_scenario
from .entanglement import (
    ProjectedBlock,
    block_concurrence,
    concurrence_lower_bound,
    project_block,
)
from .evolution import (
    SpectralDecomposition,
    asymptotic_state,
    envelopes,
    propagate,
    rabi_frequency,
    spectral_decompose,
)
from .lindblad import (
    ComparisonReport,
    basis_index,
    compare_states,
    dense_from_block,
    dephasing_signs,
    hamiltonian,
    integrate,
    integrate_path,
    lindblad_rhs,
    liouvillian,
    space_dim,
)
from .model import (
    TAIL_TOL,
    TRACE_TOL,
    BlockState,
    ModelParams,
    ParameterError,
    ValidationReport,
    build_initial_state,
    default_n_max,
    load_params,
    params_from_mapping,
    poisson_pmf,
    poisson_tail,
    read_config,
    validate_params,
)
from .observables import (
    EntropyReport,
    atomic_inversion,
    entropy_report,
    reduced_states,
    shannon_entropy,
)
from .revival import (
    RevivalSeries,
    poisson_sum_inversion,
    revival_series,
    revival_times,
)

__version__ = "0.1.0"

__all__ = [
    "BlockState",
    "CATALOG",
    "COLUMNS",
    "ComparisonReport",
    "Curve",
    "EntropyReport",
    "ModelParams",
    "ParameterError",
    "ProjectedBlock",
    "RevivalSeries",
    "Scenario",
    "SpectralDecomposition",
    "TAIL_TOL",
    "TRACE_TOL",
    "TimeSeries",
    "ValidationReport",
    "asymptotic_state",
    "atomic_inversion",
    "basis_index",
    "block_concurrence",
    "build_initial_state",
    "compare_states",
    "concurrence_lower_bound",
    "default_n_max",
    "dense_from_block",
    "dephasing_signs",
    "emit_csv",
    "entropy_report",
    "envelopes",
    "hamiltonian",
    "integrate",
    "integrate_path",
    "lindblad_rhs",
    "liouvillian",
    "space_dim",
    "load_params",
    "params_from_mapping",
    "poisson_pmf",
    "poisson_sum_inversion",
    "poisson_tail",
    "project_block",
    "propagate",
    "rabi_frequency",
    "read_config",
    "reduced_states",
    "revival_series",
    "revival_times",
    "run_scenario",
    "shannon_entropy",
    "spectral_decompose",
    "validate_params",
]

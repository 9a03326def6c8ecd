"""Spectral solver for a 1-d Dirac electron in a screened Coulomb field.

The hamiltonian acts on two-component spinors on the line, with potential
-(gamma/2) e^{-|s|}.  A Pruefer angle turns the eigenvalue problem into a
saddle-connection problem for a flow on a compact cylinder: bound states of
winding number N correspond to orbits shot from Theta(0) = pi (2 - N) that
settle on the saddle phase 2 pi - acos(E) - 2 pi N.  How many windings are
bound at a given coupling is read off two interlaced sequences of Whittaker
thresholds, computed either from truncated Jacobi matrices (Ikebe) or by
direct bisection on the series.

Public surface:

- model:     parameters, Pruefer state, vector fields, cylinder equilibria
- ode:       adaptive Dormand-Prince integrator with saddle-aware stopping
- specfun:   Kummer/Whittaker functions, barrier solutions, sign counting
- roots:     threshold tables gamma_j / Gamma_j and interval arithmetic
- spectrum:  shooting, eigenvalue bisection, enumeration, reconstruction
- cli:       deterministic command-line front end and plot-data emitters
"""

from .errors import (
    BadParameter,
    BracketFailure,
    CountMismatch,
    DegenerateThreshold,
    DiracSolverError,
    DomainError,
    EnergyTooCloseToContinuum,
    IndeterminateTerminal,
    NoEquilibria,
    NonConvergence,
    NonNormalizable,
    PoleError,
    StepSizeUnderflow,
    ThresholdDegenerate,
    ValidationFailure,
)
from .model import (
    EquilibriumKind,
    EquilibriumPoint,
    ModelParams,
    PruferState,
    WindingNumber,
    equilibria,
    screened_coupling,
    theta_rhs,
    winding_number,
    z_rhs,
)
from .ode import (
    DEFAULT_CONFIG,
    Direction,
    IntegratorConfig,
    Orbit,
    Terminal,
    TerminalKind,
    classify_terminal,
    default_margin,
    integrate,
)
from .specfun import (
    BarrierSolution,
    EnergySign,
    Parity,
    barrier_solution,
    complex_gamma,
    coulomb_f,
    count_sign_changes,
    find_sign_changes,
    kummer_m,
    kummer_u_log_series,
    whittaker_m,
    whittaker_m_prime,
    whittaker_w,
    whittaker_w_prime,
)
from .roots import (
    RootMethod,
    RootTables,
    TridiagonalMatrix,
    bisection_roots,
    build_root_tables,
    default_order,
    ikebe_critical_matrix,
    ikebe_zero_matrix,
    interval_indices,
    nearest_entry_distance,
    root_tables_from_dict,
    root_tables_to_csv,
    root_tables_to_dict,
    symmetric_tridiagonal_eigenvalues,
)
from .spectrum import (
    BoundState,
    SpectrumSummary,
    count_crests,
    enumerate_bound_states,
    find_eigenvalue,
    reconstruct_wavefunction,
    shoot,
    shooting_horizon,
    staircase,
)
from .cli import (
    RunConfig,
    emit_plot_data,
    load_or_build_tables,
    main,
    required_count,
    run,
    save_root_tables,
    summary_payload,
    table_checksum,
)

__version__ = "0.1.0"

__all__ = [
    "BadParameter",
    "BarrierSolution",
    "BoundState",
    "BracketFailure",
    "CountMismatch",
    "DEFAULT_CONFIG",
    "DegenerateThreshold",
    "DiracSolverError",
    "Direction",
    "DomainError",
    "EnergySign",
    "EnergyTooCloseToContinuum",
    "EquilibriumKind",
    "EquilibriumPoint",
    "IndeterminateTerminal",
    "IntegratorConfig",
    "ModelParams",
    "NoEquilibria",
    "NonConvergence",
    "NonNormalizable",
    "Orbit",
    "Parity",
    "PoleError",
    "PruferState",
    "RootMethod",
    "RootTables",
    "RunConfig",
    "SpectrumSummary",
    "StepSizeUnderflow",
    "Terminal",
    "TerminalKind",
    "ThresholdDegenerate",
    "TridiagonalMatrix",
    "ValidationFailure",
    "WindingNumber",
    "barrier_solution",
    "bisection_roots",
    "build_root_tables",
    "classify_terminal",
    "complex_gamma",
    "count_crests",
    "count_sign_changes",
    "coulomb_f",
    "default_margin",
    "default_order",
    "emit_plot_data",
    "enumerate_bound_states",
    "equilibria",
    "find_eigenvalue",
    "find_sign_changes",
    "ikebe_critical_matrix",
    "ikebe_zero_matrix",
    "integrate",
    "interval_indices",
    "kummer_m",
    "kummer_u_log_series",
    "load_or_build_tables",
    "main",
    "nearest_entry_distance",
    "reconstruct_wavefunction",
    "required_count",
    "root_tables_from_dict",
    "root_tables_to_csv",
    "root_tables_to_dict",
    "run",
    "save_root_tables",
    "summary_payload",
    "table_checksum",
    "screened_coupling",
    "shoot",
    "shooting_horizon",
    "staircase",
    "symmetric_tridiagonal_eigenvalues",
    "theta_rhs",
    "whittaker_m",
    "whittaker_m_prime",
    "whittaker_w",
    "whittaker_w_prime",
    "winding_number",
    "z_rhs",
]

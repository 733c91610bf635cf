"""Displaced single-mode cavity field toolkit.

Exact normal-ordered boson algebra, a truncated Fock-space oracle, field
expectation models with cosine-mode decomposition, and ramped-Hamiltonian
transition simulations, all cross-checkable against each other.
"""

from .algebra import (
    Convention,
    NormalMonomial,
    OperatorExpr,
    TimeScalar,
    adjoint,
    annihilation,
    atom,
    coherent_expectation,
    combine,
    creation,
    displace_subst,
    displaced_state_expectation,
    evolve_phases,
    identity,
    imag_residual,
    multiply,
    normal_ordered_square,
    operator_expr_from_json,
    operator_expr_to_json,
    power,
    time_scalar_from_json,
    time_scalar_to_json,
    to_real_modes,
)
from .exact import CoeffPoly, RationalComplex
from .field import (
    CheckRow,
    CoherentState,
    DisplacedState,
    FieldConfig,
    FieldSeries,
    NumberState,
    Report,
    decompose_modes,
    electric_field_expr,
    expectation_series,
    magnetic_field_expr,
    make_time_grid,
    mode_phase_lattice,
    perturbed_field_expr,
    verify_report,
)
from .fock import (
    FockOperator,
    FockSpace,
    HamiltonianPair,
    Ket,
    NormDriftError,
    PropagatorConfig,
    TruncationError,
    coherent_ket,
    default_dim,
    displaced_number_ket,
    displacement_matrix,
    expectation,
    fidelity,
    hamiltonians,
    ladder_matrices,
    matrix_of,
    number_ket,
    schrodinger_evolve,
    unitarity_defect,
)
from .modes import Mode, ModeList, NonRealSignalError, wrap_phase
from .schedules import RampSchedule
from .transition import (
    IntensityProfile,
    SlitGeometry,
    TransitionResult,
    double_slit_pattern,
    run_transition,
)

__version__ = "0.1.0"

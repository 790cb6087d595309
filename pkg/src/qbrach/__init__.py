"""Time-optimal Hamiltonians for transforming one pure quantum state into another."""

from .audit import AuditConfig, AuditReport, Verdict, random_constrained_hamiltonian, run_audit
from .brachistochrone import (
    BrachistochroneSolution,
    SpreadConvention,
    analytic_state,
    apply_gauge,
    axis_states,
    closed_form_hamiltonian,
    energy_uncertainty,
    expanded_hamiltonian,
    hamiltonian_from_axis,
    minimal_time,
    optimal_hamiltonian,
    solve,
)
from .config import TOLERANCES, Tolerances
from .evolution import (
    FirstPassageResult,
    Propagator,
    TrajectorySample,
    first_passage,
    integrate_rk4,
    propagate,
    sample_analytic_trajectory,
    sample_trajectory,
)
from .exceptions import (
    AxisError,
    ConvergenceError,
    DegeneratePairError,
    DimensionError,
    DomainError,
    NormalizationError,
    NotHermitianError,
    QbrachError,
)
from .geometry import PlaneDecomposition, as_state, decompose_plane, fidelity, fs_distance, infidelity, normalize
from .linalg import EigenSystem, hermitian_eigensystem, inner_product, matrix_exponential_action

__version__ = "0.1.0"

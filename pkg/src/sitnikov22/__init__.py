"""Circular double (2+2) Sitnikov problem.

Two infinitesimal bodies oscillate on the axis through the barycenter of two
circling primaries.  The package provides the closed-form solutions built on
Jacobi elliptic functions, action-angle quantities, the symplectic collision
regularization, collision-aware integrators, and the enumeration of energy
surfaces carrying resonant tori of periodic orbits.
"""

__version__ = "0.1.0"

from .dynamics import (
    EQUAL_MASSES,
    MassParams,
    RegState,
    State,
    bounce_map,
    crossing_plane_residual,
    hamiltonian_reduced,
    hamiltonian_regularized,
    hamiltonian_restricted,
    partial_energies,
    regularized_vector_field,
    rho,
    rho_inverse,
    rho_jacobian,
    symplectic_defect,
    vector_field_original,
)
from .elliptic import (
    JacobiTriple,
    complete_E,
    complete_K,
    complete_Pi,
    heuman_lambda,
    incomplete_E,
    incomplete_F,
    incomplete_Pi,
    jacobi,
    jacobi_am,
    jacobi_epsilon,
    jacobi_pi,
    third_kind_lawden,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidLevelError,
    NonexistentLevelError,
    NotAtCollisionError,
    PrecisionWarning,
    SingularityError,
    StepFailureError,
)
from .integrators import (
    Event,
    IntegrationConfig,
    RegTrajectory,
    Trajectory,
    detect_collisions,
    integrate_reduced,
    integrate_regularized,
    integrate_restricted,
)
from .resonance import (
    FiberClass,
    MomentumLine,
    ResonanceTriple,
    ResonantSurface,
    atlas,
    classify_fiber,
    classify_surface,
    energy_for_period_ratio,
    enumerate_triples,
    momentum_line,
    rational_point_check,
    resonant_surface,
    totient,
    triple_count_bound,
)
from .solution import (
    EnergyPair,
    OrbitParams,
    action_J,
    analytic_state,
    angle_theta,
    energy_from_modulus,
    modulus_from_energy,
    nu_of_time,
    period_T,
    period_over_2pi_heuman,
    period_ratio_rationality_residual,
    q_max,
    time_of_nu,
)

"""Hamiltonians, vector fields, collision regularization and bounce maps.

Two secondaries of masses mu and nu = c*mu move on the axis through the
barycenter of two unit-separation primaries of mass 1/2 each (hence the 1/4
under the square roots).  The mass bundle is alpha = 1/(1+c), beta = 1-alpha.

Coordinates:

* ``State``   -- original coordinates (q3, q4, p3, p4); the reduced problem
  (mu > 0) is singular on the collision set q3 = q4.
* ``RegState`` -- regularized coordinates (Q3, Q4, P3, P4) related to the
  original ones by the symplectic map ``rho``; Q3 = 0 is the collision locus
  and the regularized Hamiltonian ``hamiltonian_regularized`` is polynomial
  there.

Sign convention: the symplectic form is sum_i dp_i ^ dq_i, i.e. the matrix
Omega = [[0, -I], [I, 0]] in the (q, p) block ordering used by
``symplectic_defect``.

All values are immutable and the functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotAtCollisionError, SingularityError

COLLISION_TOL = 1e-10  # default |q3 - q4| tolerance for "at collision"


@dataclass(frozen=True)
class MassParams:
    """Mass-ratio bundle (c, mu, alpha, beta) with alpha = 1/(1+c)."""

    c: float
    mu: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.c <= 1.0:
            raise ValueError(f"mass ratio c={self.c!r} outside (0, 1]")
        if self.mu < 0.0:
            raise ValueError(f"secondary mass mu={self.mu!r} < 0")
        if abs(self.alpha + self.beta - 1.0) > 1e-14:
            raise ValueError("alpha + beta must equal 1")

    @classmethod
    def from_ratio(cls, c: float, mu: float = 0.0) -> "MassParams":
        alpha = 1.0 / (1.0 + c)
        return cls(c=c, mu=mu, alpha=alpha, beta=1.0 - alpha)


EQUAL_MASSES = MassParams.from_ratio(1.0)


@dataclass(frozen=True)
class State:
    """Original coordinates: positions and conjugate momenta of the two
    secondaries on the vertical axis."""

    q3: float
    q4: float
    p3: float
    p4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q3, self.q4, self.p3, self.p4], dtype=float)


@dataclass(frozen=True)
class RegState:
    """Regularized coordinates; Q3 = 0 is the collision locus."""

    Q3: float
    Q4: float
    P3: float
    P4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.Q3, self.Q4, self.P3, self.P4], dtype=float)


def _axis_potential(q: float) -> float:
    return 1.0 / math.sqrt(q * q + 0.25)


def _axis_force(q: float) -> float:
    """-d/dq of -1/sqrt(q^2 + 1/4)."""
    return -q * (q * q + 0.25) ** -1.5


def hamiltonian_reduced(s: State, m: MassParams) -> float:
    """Reduced-problem Hamiltonian; singular at q3 = q4 when mu > 0."""
    if m.mu > 0.0 and s.q3 == s.q4:
        raise SingularityError("collision q3 == q4 is singular for mu > 0")
    val = (
        0.5 * (s.p3 * s.p3 / m.alpha + s.p4 * s.p4 / m.beta)
        - m.alpha * _axis_potential(s.q3)
        - m.beta * _axis_potential(s.q4)
    )
    if m.mu != 0.0:
        val -= m.mu * m.beta / (s.q3 - s.q4)
    return val


def hamiltonian_restricted(s: State, c: float = 1.0) -> float:
    """Decoupled Hamiltonian h3 + c*h4 with velocities as momenta; collisions
    are regular points of this function."""
    h3 = 0.5 * s.p3 * s.p3 - _axis_potential(s.q3)
    h4 = 0.5 * s.p4 * s.p4 - _axis_potential(s.q4)
    return h3 + c * h4


def partial_energies(s: State) -> tuple[float, float]:
    """Per-body energies (h3, h4) of the decoupled system (momentum map with
    the circular primary radius r = 1/2)."""
    return (
        0.5 * s.p3 * s.p3 - _axis_potential(s.q3),
        0.5 * s.p4 * s.p4 - _axis_potential(s.q4),
    )


def vector_field_original(s: State, m: MassParams) -> State:
    """Hamiltonian vector field of the reduced problem in original
    coordinates, returned as a State-shaped derivative.

    The potential gradient carries the power 3/2 in the denominator,
    consistent with differentiating the Hamiltonian.
    """
    if m.mu > 0.0 and s.q3 == s.q4:
        raise SingularityError("vector field singular at q3 == q4 for mu > 0")
    f3 = m.alpha * _axis_force(s.q3)
    f4 = m.beta * _axis_force(s.q4)
    if m.mu != 0.0:
        coupling = m.mu * m.beta / (s.q3 - s.q4) ** 2
        f3 -= coupling
        f4 += coupling
    return State(q3=s.p3 / m.alpha, q4=s.p4 / m.beta, p3=f3, p4=f4)


# ----------------------------------------------------------------------
# Regularization.
# ----------------------------------------------------------------------

def rho(r: RegState, m: MassParams) -> State:
    """Symplectic regularizing map (Q, P) -> (q, p); the momentum components
    are singular on Q3 = 0."""
    if r.Q3 == 0.0:
        raise SingularityError("rho momenta undefined at Q3 == 0")
    half_sq = 0.5 * r.Q3 * r.Q3
    ratio = r.P3 / r.Q3
    return State(
        q3=r.Q4 + m.beta * half_sq,
        q4=r.Q4 - m.alpha * half_sq,
        p3=m.alpha * r.P4 + ratio,
        p4=m.beta * r.P4 - ratio,
    )


def rho_positions(r: RegState, m: MassParams) -> tuple[float, float]:
    """Position half of rho, continuous through the collision locus."""
    half_sq = 0.5 * r.Q3 * r.Q3
    return (r.Q4 + m.beta * half_sq, r.Q4 - m.alpha * half_sq)


def rho_inverse(s: State, m: MassParams) -> RegState:
    """Inverse of rho on the sheet q3 > q4 with Q3 > 0."""
    gap = s.q3 - s.q4
    if gap <= 0.0:
        raise SingularityError(f"rho_inverse needs q3 > q4, got gap {gap!r}")
    Q3 = math.sqrt(2.0 * gap)
    return RegState(
        Q3=Q3,
        Q4=m.alpha * s.q3 + m.beta * s.q4,
        P3=Q3 * (m.beta * s.p3 - m.alpha * s.p4),
        P4=s.p3 + s.p4,
    )


def rho_jacobian(r: RegState, m: MassParams) -> np.ndarray:
    """Closed-form Jacobian of rho in the (q3, q4, p3, p4) x
    (Q3, Q4, P3, P4) ordering."""
    if r.Q3 == 0.0:
        raise SingularityError("Jacobian of rho undefined at Q3 == 0")
    inv = 1.0 / r.Q3
    ratio = r.P3 * inv * inv
    return np.array(
        [
            [m.beta * r.Q3, 1.0, 0.0, 0.0],
            [-m.alpha * r.Q3, 1.0, 0.0, 0.0],
            [-ratio, 0.0, inv, m.alpha],
            [ratio, 0.0, -inv, m.beta],
        ]
    )


_OMEGA = np.array(
    [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
)


def symplectic_defect(
    r: RegState, m: MassParams, analytic: bool = True, fd_step: float = 1e-6
) -> float:
    """Frobenius norm of J^T Omega J - Omega for the Jacobian J of rho at r.

    With the closed-form Jacobian this is a pure rounding residual
    (< 1e-12 at moderate points); with finite differences (analytic=False)
    expect ~1e-8 depending on fd_step.
    """
    if r.Q3 == 0.0:
        raise SingularityError("defect undefined at Q3 == 0")
    if analytic:
        J = rho_jacobian(r, m)
    else:
        J = np.empty((4, 4))
        base = r.as_array()
        for j in range(4):
            dp = base.copy()
            dm = base.copy()
            dp[j] += fd_step
            dm[j] -= fd_step
            sp = rho(RegState(*dp), m).as_array()
            sm = rho(RegState(*dm), m).as_array()
            J[:, j] = (sp - sm) / (2.0 * fd_step)
    return float(np.linalg.norm(J.T @ _OMEGA @ J - _OMEGA))


def hamiltonian_regularized(r: RegState, mu: float, h: float, m: MassParams) -> float:
    """Regularized Hamiltonian L = alpha*beta*Q3^2*((H - h) o rho); regular
    (polynomial in the momenta) on the collision locus Q3 = 0, and meaningful
    on its zero level only."""
    ab = m.alpha * m.beta
    q3sq = r.Q3 * r.Q3
    g = _reg_potential(r, m)
    return (
        0.5 * (ab * r.P4 * r.P4 * q3sq + r.P3 * r.P3)
        - 2.0 * m.alpha * m.beta * m.beta * mu
        - ab * q3sq * (g + h)
    )


def _reg_potential(r: RegState, m: MassParams) -> float:
    """2*alpha/sqrt((2Q4+beta*Q3^2)^2+1) + 2*beta/sqrt((2Q4-alpha*Q3^2)^2+1)."""
    q3sq = r.Q3 * r.Q3
    u = 2.0 * r.Q4 + m.beta * q3sq
    v = 2.0 * r.Q4 - m.alpha * q3sq
    return 2.0 * m.alpha / math.sqrt(u * u + 1.0) + 2.0 * m.beta / math.sqrt(v * v + 1.0)


def regularized_vector_field(r: RegState, h: float, m: MassParams) -> RegState:
    """Hamiltonian vector field of L in fictitious time tau.  The secondary
    mass mu enters L only through an additive constant, so the field itself
    does not depend on it."""
    ab = m.alpha * m.beta
    q3sq = r.Q3 * r.Q3
    u = 2.0 * r.Q4 + m.beta * q3sq
    v = 2.0 * r.Q4 - m.alpha * q3sq
    ru = math.sqrt(u * u + 1.0)
    rv = math.sqrt(v * v + 1.0)
    g = 2.0 * m.alpha / ru + 2.0 * m.beta / rv
    # dG/dQ3 and dG/dQ4
    g_q3 = -4.0 * ab * r.Q3 * (u / ru ** 3 - v / rv ** 3)
    g_q4 = -4.0 * (m.alpha * u / ru ** 3 + m.beta * v / rv ** 3)
    dQ3 = r.P3
    dQ4 = ab * q3sq * r.P4
    dP3 = -(ab * r.Q3 * r.P4 * r.P4 - 2.0 * ab * r.Q3 * (g + h) - ab * q3sq * g_q3)
    dP4 = ab * q3sq * g_q4
    return RegState(Q3=dQ3, Q4=dQ4, P3=dP3, P4=dP4)


# ----------------------------------------------------------------------
# Collision bounce.
# ----------------------------------------------------------------------

def bounce_map(s: State, m: MassParams, tol: float = COLLISION_TOL) -> State:
    """Elastic-bounce continuation at a collision point.

    Equal masses (alpha = 1/2): exchange of the conjugate momenta, which is
    the smooth-crossing identification q3 - q4 -> -(q3 - q4).  Unequal
    masses: v3' = v3 - 2*beta*(v3 - v4), v4' = v4 + 2*alpha*(v3 - v4), i.e.
    p' = A^T p; the result is an involution conserving p3 + p4 and the
    kinetic energy for every alpha.
    """
    if abs(s.q3 - s.q4) > tol:
        raise NotAtCollisionError(
            f"|q3 - q4| = {abs(s.q3 - s.q4):.3e} exceeds the event tolerance {tol:g}"
        )
    if m.alpha == 0.5:
        return State(q3=s.q3, q4=s.q4, p3=s.p4, p4=s.p3)
    two_b = 2.0 * m.beta
    two_a = 2.0 * m.alpha
    return State(
        q3=s.q3,
        q4=s.q4,
        p3=(1.0 - two_b) * s.p3 + two_a * s.p4,
        p4=two_b * s.p3 + (1.0 - two_a) * s.p4,
    )


def crossing_plane_residual(s: State) -> tuple[float, float]:
    """(q3 - q4, p3 + p4); both near zero identifies a point of the
    reflection plane {q3 = q4, p3 = -p4}."""
    return (s.q3 - s.q4, s.p3 + s.p4)

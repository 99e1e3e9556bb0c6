"""Closed-form machinery of the decoupled vertical oscillators.

A single secondary with energy h in (-2, 0) oscillates with elliptic modulus
k = sqrt(2+h)/2 in (0, sqrt(2)/2).  Everything here is a function of (h, k):
the turning point, the real-time period T(h), the action J(h) of the closed
orbit, the reparametrization t(nu) between physical time and the elliptic
argument (and its inverse), the angle variable, and the analytic two-body
state

    q_i = k_i sn dn / (1 - 2 k_i^2 sn^2),    p_i = 2 sqrt(2) k_i cn,

each evaluated at nu_i(t).  The sign of the third-kind term in the action was
fixed against adaptive quadrature of the defining integral
(2 sqrt(2)/pi) int_0^{q_max} sqrt(h + 1/sqrt(q^2 + 1/4)) dq, which makes
J positive and dJ/dh = T/(2 pi).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .elliptic import (
    complete_E,
    complete_K,
    complete_Pi,
    heuman_lambda,
    jacobi,
    jacobi_epsilon,
    jacobi_pi,
)
from .errors import ConvergenceError, DomainError, PrecisionWarning

SQRT2 = math.sqrt(2.0)
K_MAX = SQRT2 / 2.0  # open upper modulus bound, h < 0
PERIOD_WARN_ENERGY = 1e-9  # -h below this triggers a precision flag


@dataclass(frozen=True)
class EnergyPair:
    """Per-body energies of the two decoupled oscillators."""

    h3: float
    h4: float

    @property
    def total(self) -> float:
        return self.h3 + self.h4


@dataclass(frozen=True)
class OrbitParams:
    """Modulus and initial phases (elliptic argument nu0, angle theta0) of
    the two bodies."""

    k3: float
    k4: float
    nu0_3: float = 0.0
    nu0_4: float = 0.0
    theta0_3: float = 0.0
    theta0_4: float = 0.0

    def __post_init__(self):
        for k in (self.k3, self.k4):
            if not 0.0 <= k < K_MAX:
                raise DomainError(f"modulus k={k!r} outside [0, sqrt(2)/2)")

    @classmethod
    def from_energies(
        cls, ep: EnergyPair, nu0: tuple[float, float] = (0.0, 0.0)
    ) -> "OrbitParams":
        return cls(
            k3=modulus_from_energy(ep.h3),
            k4=modulus_from_energy(ep.h4),
            nu0_3=nu0[0],
            nu0_4=nu0[1],
        )


def _check_energy_closed(h: float) -> None:
    if not -2.0 <= h < 0.0:
        raise DomainError(f"energy h={h!r} outside [-2, 0)")


def _check_energy_open(h: float) -> None:
    if not -2.0 < h < 0.0:
        raise DomainError(f"energy h={h!r} outside (-2, 0)")


def _check_solution_modulus(k: float) -> None:
    if not 0.0 <= k < K_MAX:
        raise DomainError(f"modulus k={k!r} outside [0, sqrt(2)/2)")


def modulus_from_energy(h: float) -> float:
    """k = sqrt(2+h)/2 for h in [-2, 0)."""
    _check_energy_closed(h)
    return 0.5 * math.sqrt(2.0 + h)


def energy_from_modulus(k: float) -> float:
    """h = 4 k^2 - 2, inverse of modulus_from_energy."""
    _check_solution_modulus(k)
    return 4.0 * k * k - 2.0


def q_max(h: float) -> float:
    """Turning point sqrt(1/h^2 - 1/4) where the momentum vanishes."""
    _check_energy_open(h)
    return math.sqrt(1.0 / (h * h) - 0.25)


def period_T(h: float) -> float:
    """Real-time period of one oscillator,
    T(h) = sqrt(2)/(2 (1 - 2k^2)) * (2E(k) - K(k) + Pi(2k^2, k)).

    Strictly increasing on (-2, 0), with limits pi/sqrt(2) at -2 and
    +infinity at 0; near h = 0 the value is large but finite and a
    PrecisionWarning flags the shrinking distance of the characteristic
    from 1.
    """
    _check_energy_open(h)
    if -h < PERIOD_WARN_ENERGY:
        warnings.warn(
            f"period evaluated at h={h!r}; characteristic 1-2k^2 underflows "
            "and accuracy degrades",
            PrecisionWarning,
            stacklevel=2,
        )
    k2 = 0.25 * (2.0 + h)
    k = math.sqrt(k2)
    return (
        SQRT2
        / (2.0 * (1.0 - 2.0 * k2))
        * (2.0 * complete_E(k) - complete_K(k) + complete_Pi(2.0 * k2, k))
    )


def action_J(h: float) -> float:
    """Action of the closed orbit at energy h,
    J(h) = sqrt(2)/pi * (K(k) + Pi(2k^2, k) - 2E(k)), with dJ/dh = T/(2 pi)."""
    _check_energy_open(h)
    k2 = 0.25 * (2.0 + h)
    k = math.sqrt(k2)
    return (
        SQRT2
        / math.pi
        * (complete_K(k) + complete_Pi(2.0 * k2, k) - 2.0 * complete_E(k))
    )


def period_over_2pi_heuman(h: float) -> float:
    """T(h)/(2 pi) assembled from first- and second-kind integrals only.

    Uses the circular-case reduction of the complete third kind through
    Heuman's lambda,
    Pi(n, k) = K + (pi/2) sqrt(n/((1-n)(n-k^2))) (1 - Lambda_0(eps, k)) with
    sin(eps)^2 = (1-n)/(1-k^2), specialized to n = 2k^2:

        T/(2 pi) = sqrt(2) E(k) / (pi (-h))
                   + sqrt(2) (1 - Lambda_0(eps, k)) / (2 (-h)^{3/2}).
    """
    _check_energy_open(h)
    k = modulus_from_energy(h)
    mh = -h
    eps = math.asin(math.sqrt(2.0 * mh / (2.0 - h)))
    lam = heuman_lambda(eps, k)
    return SQRT2 * complete_E(k) / (math.pi * mh) + SQRT2 * (1.0 - lam) / (
        2.0 * mh ** 1.5
    )


def period_ratio_rationality_residual(h: float, p: int, q: int) -> float:
    """T(h)/(2 pi) - p/q with the ratio computed through the first/second
    kind form and cross-validated against the direct period formula."""
    if q < 1:
        raise DomainError(f"denominator q={q!r} must be >= 1")
    ratio = period_over_2pi_heuman(h)
    direct = period_T(h) / (2.0 * math.pi)
    if abs(ratio - direct) > 1e-10 * max(1.0, abs(direct)):
        raise ConvergenceError(
            f"period forms disagree at h={h!r}: {ratio!r} vs {direct!r}"
        )
    return ratio - p / q


# ----------------------------------------------------------------------
# Time reparametrization t(nu) and inverse.
# ----------------------------------------------------------------------

def time_of_nu(nu: float, k: float) -> float:
    """Physical time along the orbit as a function of the elliptic argument,

    t = sqrt(2)/(8 (1-2k^2)) [2 eps(nu) - nu + Pi_J(nu, 2k^2)
        - 4 k^2 sn cn dn / (1 - 2 k^2 sn^2)],

    with the integration constant fixed by t(0) = 0.  Strictly increasing;
    t(4K) equals the period."""
    _check_solution_modulus(k)
    if nu == 0.0:
        return 0.0
    k2 = k * k
    om = 1.0 - 2.0 * k2
    sn, cn, dn = jacobi(nu, k)
    bracket = (
        2.0 * jacobi_epsilon(nu, k)
        - nu
        + jacobi_pi(nu, 2.0 * k2, k)
        - 4.0 * k2 * sn * cn * dn / (1.0 - 2.0 * k2 * sn * sn)
    )
    return SQRT2 / (8.0 * om) * bracket


def dt_dnu(nu: float, k: float) -> float:
    """Derivative of the reparametrization, sqrt(2)/(4 (1 - 2k^2 sn^2)^2)."""
    _check_solution_modulus(k)
    sn = jacobi(nu, k).sn
    return SQRT2 / (4.0 * (1.0 - 2.0 * k * k * sn * sn) ** 2)


def nu_of_time(t: float, k: float, tol: float = 1e-13, max_iter: int = 100) -> float:
    """Inverse of time_of_nu: the elliptic argument at physical time t.

    Reduces t modulo the half period, then runs a bracketed Newton iteration
    (the derivative dt/dnu is positive and bounded away from zero) with
    bisection fallback."""
    _check_solution_modulus(k)
    if t == 0.0:
        return 0.0
    if k == 0.0:
        return 2.0 * SQRT2 * t  # t = nu * sqrt(2)/4 exactly
    twoK = 2.0 * complete_K(k)
    half_period = time_of_nu(twoK, k)
    m = math.floor(t / half_period)
    tr = t - m * half_period
    if tr == 0.0:
        return twoK * m
    # bracketed Newton on [0, 2K]
    lo, hi = 0.0, twoK
    nu = twoK * tr / half_period
    f_tol = tol * max(1.0, half_period)
    for _ in range(max_iter):
        g = time_of_nu(nu, k) - tr
        if abs(g) <= f_tol:
            return twoK * m + nu
        if g > 0.0:
            hi = nu
        else:
            lo = nu
        step = g / dt_dnu(nu, k)
        nu -= step
        if not lo < nu < hi:
            nu = 0.5 * (lo + hi)
    raise ConvergenceError(
        f"nu_of_time failed to converge at t={t!r}, k={k!r}"
    )


# ----------------------------------------------------------------------
# Analytic state and angle variable.
# ----------------------------------------------------------------------

def _body_state(t: float, h: float, nu0: float) -> tuple[float, float]:
    k = modulus_from_energy(h)
    if k == 0.0:
        return 0.0, 0.0  # equilibrium at the potential minimum
    t_shift = time_of_nu(nu0, k) if nu0 != 0.0 else 0.0
    nu = nu_of_time(t + t_shift, k)
    sn, cn, dn = jacobi(nu, k)
    q = k * sn * dn / (1.0 - 2.0 * k * k * sn * sn)
    p = 2.0 * SQRT2 * k * cn
    return q, p


def analytic_state(t: float, ep: EnergyPair, nu0: tuple[float, float] = (0.0, 0.0)):
    """Closed-form state of both bodies at time t; phases enter as initial
    elliptic arguments nu0 (body i starts at argument nu0_i when t = 0)."""
    from .dynamics import State

    q3, p3 = _body_state(t, ep.h3, nu0[0])
    q4, p4 = _body_state(t, ep.h4, nu0[1])
    return State(q3=q3, q4=q4, p3=p3, p4=p4)


def angle_theta(nu: float, h: float, theta0: float = 0.0) -> float:
    """Angle variable theta(nu) = 2 pi t(nu)/T + theta0; increases by pi/2
    per quarter period K and by 2 pi per full period 4K."""
    _check_energy_open(h)
    k = modulus_from_energy(h)
    return 2.0 * math.pi * time_of_nu(nu, k) / period_T(h) + theta0

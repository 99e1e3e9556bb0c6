"""Closed-form period, action, time map and analytic state.

Independent oracles: adaptive quadrature of the defining integrals (with a
sine substitution absorbing the turning-point singularity) and
finite-difference checks of the derivative relations.
"""

import math

import numpy as np
import pytest
from scipy import integrate, special

from sitnikov22 import elliptic as el
from sitnikov22 import solution as sol
from sitnikov22.dynamics import hamiltonian_restricted, partial_energies
from sitnikov22.errors import ConvergenceError, DomainError, PrecisionWarning

SQRT2 = math.sqrt(2.0)
PAPER_RATIO = 0.824429907123718  # published T(-1)/(2 pi)
# frozen quadrature oracles (40-digit evaluations of the defining integrals)
T_M15 = 3.108131160369728  # T(-1.5) from the time integral
J_M1 = 0.52420802282836467  # J(-1) from the action integral
T_NU_03 = 0.39260788314188414  # t(nu=1, k=0.3)
T_NU_06 = 5.090083000852006  # t(nu=2.5, k=0.6)
# Analytic slope of T at h = -2: expanding T(-2+x) with k^2 = x/4 gives
# T = pi/sqrt(2) + (9 sqrt(2) pi/32) x + O(x^2).  (The literature sometimes
# quotes pi(1+4 sqrt 2)/16 = 1.3071 here, which does not match this period
# function; see the acceptance suite.)
DT_LIMIT = 9.0 * math.sqrt(2.0) * math.pi / 32.0


def period_quadrature(h):
    """Direct time integral over a quarter oscillation, q = q_max sin(psi)."""
    qm = sol.q_max(h)
    f = lambda psi: (
        qm
        * math.cos(psi)
        / math.sqrt(2.0 * (h + 1.0 / math.sqrt((qm * math.sin(psi)) ** 2 + 0.25)))
    )
    val, err = integrate.quad(f, 0.0, math.pi / 2, epsabs=1e-13, limit=200)
    return 4.0 * val


def action_quadrature(h):
    """(2 sqrt2/pi) integral of sqrt(h + 1/sqrt(q^2+1/4)) over [0, q_max]."""
    qm = sol.q_max(h)
    f = lambda psi: (
        qm
        * math.cos(psi)
        * math.sqrt(h + 1.0 / math.sqrt((qm * math.sin(psi)) ** 2 + 0.25))
    )
    val, err = integrate.quad(f, 0.0, math.pi / 2, epsabs=1e-13, limit=200)
    return 2.0 * SQRT2 / math.pi * val


def time_quadrature(nu, k):
    """Quadrature of dt/dnu = sqrt2/(4 (1 - 2 k^2 sn^2)^2), sn from scipy."""
    f = lambda u: SQRT2 / (4.0 * (1.0 - 2.0 * k * k * special.ellipj(u, k * k)[0] ** 2) ** 2)
    return integrate.quad(f, 0.0, nu, epsabs=1e-13, limit=300)[0]


class TestModulusMaps:
    @pytest.mark.parametrize(
        "h,k", [(-2.0, 0.0), (-1.0, 0.5), (-0.5, math.sqrt(1.5) / 2.0)]
    )
    def test_modulus_values(self, h, k):
        assert sol.modulus_from_energy(h) == pytest.approx(k, abs=1e-15)

    def test_roundtrip(self):
        for h in (-1.9, -1.0, -0.1):
            assert sol.energy_from_modulus(sol.modulus_from_energy(h)) == pytest.approx(
                h, abs=1e-14
            )

    def test_domain(self):
        for bad in (-2.1, 0.0, 1.0):
            with pytest.raises(DomainError):
                sol.modulus_from_energy(bad)

    @pytest.mark.parametrize(
        "h,qm",
        [(-1.0, math.sqrt(3.0) / 2.0), (-0.5, math.sqrt(15.0) / 2.0)],
    )
    def test_q_max(self, h, qm):
        assert sol.q_max(h) == pytest.approx(qm, rel=1e-14)

    def test_q_max_shrinks_to_zero(self):
        assert sol.q_max(-2.0 + 1e-12) < 1e-5


class TestPeriod:
    def test_paper_value(self):
        assert abs(sol.period_T(-1.0) / (2 * math.pi) - PAPER_RATIO) < 1e-12

    def test_lower_limit(self):
        assert sol.period_T(-2.0 + 1e-10) == pytest.approx(
            math.pi / SQRT2, abs=1e-5
        )

    def test_against_time_integral(self):
        assert sol.period_T(-1.5) == pytest.approx(T_M15, abs=1e-12)
        for h in (-1.7, -0.9, -0.2):
            assert sol.period_T(h) == pytest.approx(period_quadrature(h), abs=1e-10)

    def test_monotone_growth(self):
        grid = np.linspace(-1.999, -0.01, 1000)
        vals = [sol.period_T(h) for h in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_divergence_near_zero(self):
        assert sol.period_T(-1e-6) > 1e3

    def test_boundary_slope(self):
        d = 1e-5
        D1 = (sol.period_T(-2 + 2 * d) - sol.period_T(-2 + d)) / d
        D2 = (sol.period_T(-2 + d) - sol.period_T(-2 + d / 2)) / (d / 2)
        richardson = 2.0 * D2 - D1
        assert abs(richardson - DT_LIMIT) < 1e-3

    def test_precision_flag_near_zero_energy(self):
        with pytest.warns(PrecisionWarning):
            sol.period_T(-1e-10)

    def test_domain(self):
        for bad in (-2.0, 0.0, 1.0):
            with pytest.raises(DomainError):
                sol.period_T(bad)


class TestAction:
    def test_vanishes_at_lower_edge(self):
        assert sol.action_J(-2.0 + 1e-8) < 1e-7

    def test_against_quadrature(self):
        assert sol.action_J(-1.0) == pytest.approx(J_M1, abs=1e-12)
        for h in (-1.8, -1.0, -0.4):
            assert sol.action_J(h) == pytest.approx(action_quadrature(h), abs=1e-10)

    def test_derivative_is_scaled_period(self):
        d = 1e-6
        h = -1.2
        fd = (sol.action_J(h + d) - sol.action_J(h - d)) / (2 * d)
        assert abs(fd - sol.period_T(h) / (2 * math.pi)) < 1e-6


class TestTimeMap:
    def test_zero(self):
        assert sol.time_of_nu(0.0, 0.3) == 0.0

    def test_full_period(self):
        k = 0.5
        assert sol.time_of_nu(4 * el.complete_K(k), k) == pytest.approx(
            sol.period_T(-1.0), abs=1e-12
        )

    def test_frozen_quadrature_values(self):
        assert sol.time_of_nu(1.0, 0.3) == pytest.approx(T_NU_03, abs=1e-12)
        assert sol.time_of_nu(2.5, 0.6) == pytest.approx(T_NU_06, abs=1e-12)

    @pytest.mark.parametrize("k", [0.1, 0.35, 0.62])
    def test_against_quadrature(self, k):
        K = el.complete_K(k)
        for nu in np.linspace(0.2, 3.8 * K, 7):
            assert sol.time_of_nu(nu, k) == pytest.approx(
                time_quadrature(nu, k), abs=1e-10
            )

    def test_strictly_increasing(self):
        k = 0.45
        grid = np.linspace(-2.0, 9.0, 200)
        vals = [sol.time_of_nu(nu, k) for nu in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_inverse_roundtrip(self):
        for k in (0.0, 0.2, 0.45, 0.69):
            for t in (0.0, 0.37, 2.9, -4.2, 123.456):
                nu = sol.nu_of_time(t, k)
                assert abs(sol.time_of_nu(nu, k) - t) < 1e-10

    def test_half_period_inverse(self):
        h = -1.3
        k = sol.modulus_from_energy(h)
        nu = sol.nu_of_time(sol.period_T(h) / 2.0, k)
        assert nu == pytest.approx(2.0 * el.complete_K(k), abs=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            sol.time_of_nu(1.0, 0.8)  # modulus beyond sqrt(2)/2


class TestAnalyticState:
    def test_initial_point_zero_phase(self):
        ep = sol.EnergyPair(-1.0, -0.6)
        s = sol.analytic_state(0.0, ep)
        assert s.q3 == 0.0 and s.q4 == 0.0
        assert s.p3 == pytest.approx(2 * SQRT2 * sol.modulus_from_energy(-1.0))
        assert s.p4 == pytest.approx(2 * SQRT2 * sol.modulus_from_energy(-0.6))

    def test_energy_conservation(self):
        rng = np.random.default_rng(21)
        ep = sol.EnergyPair(-1.37, -0.52)
        for _ in range(50):
            t = rng.uniform(-20.0, 20.0)
            s = sol.analytic_state(t, ep, (0.4, 1.9))
            assert hamiltonian_restricted(s, 1.0) == pytest.approx(
                ep.total, abs=1e-10
            )
            h3, h4 = partial_energies(s)
            assert h3 == pytest.approx(ep.h3, abs=1e-10)
            assert h4 == pytest.approx(ep.h4, abs=1e-10)

    def test_periodicity(self):
        ep = sol.EnergyPair(-0.9, -0.9)
        T = sol.period_T(-0.9)
        a = sol.analytic_state(0.3, ep, (0.5, 2.5))
        b = sol.analytic_state(0.3 + T, ep, (0.5, 2.5))
        for name in ("q3", "q4", "p3", "p4"):
            assert getattr(a, name) == pytest.approx(getattr(b, name), abs=1e-9)

    def test_satisfies_equations_of_motion(self):
        # FD second derivative of q against the axis force along the orbit
        ep = sol.EnergyPair(-1.1, -0.7)
        d = 1e-4
        for t in (0.3, 1.1, 2.9):
            sm = sol.analytic_state(t - d, ep, (0.2, 0.8))
            s0 = sol.analytic_state(t, ep, (0.2, 0.8))
            sp = sol.analytic_state(t + d, ep, (0.2, 0.8))
            for q_name in ("q3", "q4"):
                q = getattr(s0, q_name)
                acc = (getattr(sp, q_name) - 2 * q + getattr(sm, q_name)) / d ** 2
                force = -q / (q * q + 0.25) ** 1.5
                assert abs(acc - force) < 1e-6

    def test_phase_is_initial_elliptic_argument(self):
        ep = sol.EnergyPair(-1.0, -1.0)
        k = sol.modulus_from_energy(-1.0)
        K = el.complete_K(k)
        s = sol.analytic_state(0.0, ep, (K, 3 * K))
        assert s.q3 == pytest.approx(sol.q_max(-1.0), abs=1e-12)
        assert s.q4 == pytest.approx(-sol.q_max(-1.0), abs=1e-12)
        assert abs(s.p3) < 1e-12 and abs(s.p4) < 1e-12


class TestAngle:
    def test_quarter_and_full_period(self):
        h = -1.2
        k = sol.modulus_from_energy(h)
        K = el.complete_K(k)
        assert sol.angle_theta(0.0, h, 0.7) == pytest.approx(0.7, abs=1e-14)
        assert sol.angle_theta(K, h, 0.7) - 0.7 == pytest.approx(
            math.pi / 2, abs=1e-12
        )
        assert sol.angle_theta(4 * K, h, 0.7) - 0.7 == pytest.approx(
            2 * math.pi, abs=1e-12
        )

    def test_domain(self):
        with pytest.raises(DomainError):
            sol.angle_theta(1.0, -2.5)


class TestRationalityResidual:
    def test_form_equivalence(self):
        for h in (-1.9, -0.8, -0.1):
            assert abs(
                sol.period_over_2pi_heuman(h) - sol.period_T(h) / (2 * math.pi)
            ) < 1e-10

    def test_residual_against_paper_ratio(self):
        # rounding the published ratio to 6 decimals leaves exactly that gap
        p, q = 824430, 1000000
        res = sol.period_ratio_rationality_residual(-1.0, p, q)
        assert res == pytest.approx(PAPER_RATIO - p / q, abs=1e-12)

    def test_zero_residual_on_resonant_energy(self):
        from sitnikov22.resonance import energy_for_period_ratio

        h = energy_for_period_ratio(1, 1)  # T(h) = 2 pi
        assert abs(sol.period_ratio_rationality_residual(h, 1, 1)) < 1e-10

    def test_invalid_denominator(self):
        with pytest.raises(DomainError):
            sol.period_ratio_rationality_residual(-1.0, 1, 0)

"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line with the measured residuals.

Two sub-criteria assert constants that the implemented (and independently
quadrature-verified) period function does not satisfy; they are implemented
faithfully and fail:

* criterion 2 (slope part): the claimed boundary slope pi(1+4 sqrt 2)/16 =
  1.3070703 differs from the true limit 9 sqrt(2) pi/32 = 1.2495608 of the
  same period function whose value at h = -1 reproduces the published
  0.824429907123718 to 7e-17 and whose quadrature oracle agrees to 1e-12;
* criterion 10 (bound part): the counting bound 8 p phi(p) + sum phi(q) is
  exceeded by the exhaustive triple count for every p in [2, 50] (already
  21 > 19 at p = 2), so it is not an upper bound of the enumeration it
  quantifies.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate, special

from sitnikov22 import elliptic as el
from sitnikov22.dynamics import (
    MassParams,
    RegState,
    State,
    bounce_map,
    hamiltonian_reduced,
    hamiltonian_restricted,
    regularized_vector_field,
    rho,
    rho_inverse,
    symplectic_defect,
)
from sitnikov22.integrators import (
    IntegrationConfig,
    integrate_regularized,
    integrate_restricted,
)
from sitnikov22.resonance import (
    ResonanceTriple,
    atlas,
    classify_surface,
    enumerate_triples,
    resonant_surface,
    triple_count_bound,
)
from sitnikov22.solution import (
    EnergyPair,
    action_J,
    analytic_state,
    modulus_from_energy,
    period_T,
    time_of_nu,
)

SQRT2 = math.sqrt(2.0)
PAPER_RATIO = 0.824429907123718
CLAIMED_SLOPE = math.pi * (1.0 + 4.0 * SQRT2) / 16.0


def report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num:02d}: {detail}"


def test_c01_paper_period_value():
    period_T(-1.0)  # warm-up
    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        value = period_T(-1.0) / (2.0 * math.pi)
        best = min(best, time.perf_counter() - t0)
    residual = abs(value - PAPER_RATIO)
    report(
        1,
        residual < 1e-12 and best < 1e-3,
        f"T(-1)/2pi residual {residual:.2e} (tol 1e-12), runtime {best * 1e6:.0f} us (cap 1 ms)",
    )


def test_c02a_period_limit():
    worst = 0.0
    for d in (1e-4, 1e-6, 1e-8):
        gap = abs(period_T(-2.0 + d) - math.pi / SQRT2)
        worst = max(worst, gap / (10.0 * math.sqrt(d)))
    report(2, worst < 1.0, f"limit pi/sqrt2 reached; worst |T - pi/sqrt2|/(10 sqrt(d)) = {worst:.2e}")


def test_c02b_boundary_slope_matches_claimed_constant():
    d = 1e-5
    D1 = (period_T(-2 + 2 * d) - period_T(-2 + d)) / d
    D2 = (period_T(-2 + d) - period_T(-2 + d / 2)) / (d / 2)
    richardson = 2.0 * D2 - D1
    residual = abs(richardson - CLAIMED_SLOPE)
    true_limit = 9.0 * SQRT2 * math.pi / 32.0
    report(
        2,
        residual < 1e-3,
        f"Richardson slope {richardson:.10f} vs claimed pi(1+4sqrt2)/16 = "
        f"{CLAIMED_SLOPE:.10f}, residual {residual:.3e} (tol 1e-3); the "
        f"extrapolation converges to 9 sqrt(2) pi/32 = {true_limit:.10f} "
        f"(off by {abs(richardson - true_limit):.1e}), so the claimed "
        "constant does not belong to this period function",
    )


def test_c03_monotonicity_sweep():
    grid = np.linspace(-1.999, -0.01, 1000)
    vals = [period_T(h) for h in grid]
    violations = sum(1 for a, b in zip(vals, vals[1:]) if b <= a)
    report(3, violations == 0, f"1000-point sweep, {violations} monotonicity violations")


def quad_action(h):
    qm = math.sqrt(1.0 / (h * h) - 0.25)
    f = lambda psi: (
        qm * math.cos(psi) * math.sqrt(h + 1.0 / math.sqrt((qm * math.sin(psi)) ** 2 + 0.25))
    )
    return 2.0 * SQRT2 / math.pi * integrate.quad(f, 0.0, math.pi / 2, epsabs=1e-13, limit=200)[0]


def test_c04_action_oracle_equivalence():
    grid = np.linspace(-1.95, -0.05, 50)
    worst = max(abs(action_J(h) - quad_action(h)) for h in grid)
    d = 1e-6
    worst_dj = max(
        abs((action_J(h + d) - action_J(h - d)) / (2 * d) - period_T(h) / (2 * math.pi))
        for h in np.linspace(-1.8, -0.2, 9)
    )
    report(
        4,
        worst < 1e-10 and worst_dj < 1e-6,
        f"closed form vs quadrature worst {worst:.2e} (tol 1e-10); "
        f"|dJ/dh - T/2pi| worst {worst_dj:.2e} (tol 1e-6)",
    )


def quad_time(nu, k):
    f = lambda u: SQRT2 / (4.0 * (1.0 - 2.0 * k * k * special.ellipj(u, k * k)[0] ** 2) ** 2)
    return integrate.quad(f, 0.0, nu, epsabs=1e-13, limit=300)[0]


def test_c05_time_map_oracle_equivalence():
    worst = 0.0
    worst_period = 0.0
    for k in np.linspace(0.05, 0.68, 10):
        K = el.complete_K(k)
        for nu in np.linspace(0.1, 3.9 * K, 20):
            worst = max(worst, abs(time_of_nu(nu, k) - quad_time(nu, k)))
        h = 4.0 * k * k - 2.0
        worst_period = max(worst_period, abs(time_of_nu(4.0 * K, k) - period_T(h)))
    report(
        5,
        worst < 1e-10 and worst_period < 1e-10,
        f"20x10 grid closed form vs quadrature worst {worst:.2e}; "
        f"|t(4K) - T| worst {worst_period:.2e} (tol 1e-10)",
    )


def test_c06_analytic_numeric_equivalence():
    started = time.perf_counter()
    h = -1.0
    k = modulus_from_energy(h)
    K = el.complete_K(k)
    T = period_T(h)
    ep = EnergyPair(h, h)
    nu0 = (K, 3.0 * K)
    s0 = analytic_state(0.0, ep, nu0)
    sT = analytic_state(T, ep, nu0)
    cfg = IntegrationConfig(dt=2e-5, t_max=T, sample_interval=T, collision_policy="swap")
    f = integrate_restricted(s0, 1.0, cfg).final_state
    worst = max(
        abs(f.q3 - sT.q3), abs(f.q4 - sT.q4), abs(f.p3 - sT.p3), abs(f.p4 - sT.p4)
    )
    cfg100 = IntegrationConfig(dt=1e-3, t_max=100 * T, sample_interval=T, collision_policy="swap")
    f100 = integrate_restricted(s0, 1.0, cfg100).final_state
    drift = abs(hamiltonian_restricted(f100, 1.0) - hamiltonian_restricted(s0, 1.0))
    wall = time.perf_counter() - started
    report(
        6,
        worst < 1e-8 and drift < 1e-9 and wall < 10.0,
        f"one-period worst component error {worst:.2e} (tol 1e-8); 100-period "
        f"energy drift {drift:.2e} (tol 1e-9); runtime {wall:.1f} s (cap 10 s)",
    )


def test_c07_symplecticity():
    rng = np.random.default_rng(42)
    worst = 0.0
    for alpha in (0.5, 0.6, 0.9):
        m = MassParams.from_ratio((1.0 - alpha) / alpha)
        for _ in range(100):
            r = RegState(
                Q3=rng.uniform(0.05, 2.0) * rng.choice([-1.0, 1.0]),
                Q4=rng.uniform(-2.0, 2.0),
                P3=rng.uniform(-2.0, 2.0),
                P4=rng.uniform(-2.0, 2.0),
            )
            worst = max(worst, symplectic_defect(r, m))
    report(7, worst < 1e-9, f"|J^T Omega J - Omega| worst {worst:.2e} over 300 points (tol 1e-9)")


def test_c08_regularized_flow_through_collision():
    h = -1.0
    k = modulus_from_energy(h)
    K = el.complete_K(k)
    T = period_T(h)
    ep = EnergyPair(h, h)
    s0 = analytic_state(0.0, ep, (K, 3.0 * K))
    mu = 1e-9  # the mu -> 0 crossing witness: P3 = 2 beta sqrt(alpha mu) != 0
    m = MassParams.from_ratio(1.0, mu=mu)
    s_red = State(s0.q3, s0.q4, m.alpha * s0.p3, m.beta * s0.p4)
    r0 = rho_inverse(s_red, m)
    h_run = hamiltonian_reduced(s_red, m)
    cfg = IntegrationConfig(
        dt=1.0, t_max=40.0, method="rk45", rel_tol=1e-11, abs_tol=1e-13,
        sample_interval=0.25,
    )
    reg = integrate_regularized(r0, mu, h_run, m, cfg)
    max_level = reg.level_values().max()
    crossings = [e for e in reg.events if abs(e.t - T / 4) < 1e-3]
    d = regularized_vector_field(crossings[0].state, h_run, m)
    finite = all(math.isfinite(v) for v in (d.Q3, d.Q4, d.P3, d.P4))
    worst = 0.0
    for tq in (0.4, 1.0, 1.7, 2.4):  # all at least 0.15 from the collision
        _, rs = reg.state_at_time(tq)
        mapped = rho(rs, m)
        ref = integrate_restricted(
            s0, 1.0, IntegrationConfig(dt=2e-5, t_max=tq, sample_interval=tq)
        ).final_state
        worst = max(
            worst,
            abs(mapped.q3 - ref.q3),
            abs(mapped.q4 - ref.q4),
            abs(mapped.p3 / m.alpha - ref.p3),
            abs(mapped.p4 / m.beta - ref.p4),
        )
    report(
        8,
        max_level < 1e-8 and len(crossings) == 1 and finite and worst < 1e-7,
        f"max |L| {max_level:.2e} (tol 1e-8); Q3=0 crossed at t = T/4 with "
        f"finite derivatives; mapped orbit vs swap-policy orbit worst {worst:.2e} (tol 1e-7)",
    )


def test_c09_resonance_closure():
    worst_ident = 0.0
    worst_closure = 0.0
    for triple in ((1, 1, 1), (2, 1, 1), (3, 2, 1)):
        t = ResonanceTriple(*triple)
        s = resonant_surface(t)
        worst_ident = max(
            worst_ident,
            abs(t.q * period_T(s.h3) - s.tau),
            abs(t.n * period_T(s.h4) - s.tau),
        )
        k3 = modulus_from_energy(s.h3)
        k4 = modulus_from_energy(s.h4)
        nu0 = (el.complete_K(k3), 3.0 * el.complete_K(k4))
        s0 = analytic_state(0.0, EnergyPair(s.h3, s.h4), nu0)
        cfg = IntegrationConfig(
            dt=2e-5, t_max=s.tau, sample_interval=s.tau, collision_policy="swap"
        )
        f = integrate_restricted(s0, 1.0, cfg).final_state
        worst_closure = max(
            worst_closure,
            abs(f.q3 - s0.q3), abs(f.q4 - s0.q4), abs(f.p3 - s0.p3), abs(f.p4 - s0.p4),
        )
    report(
        9,
        worst_ident < 1e-9 and worst_closure < 1e-7,
        f"q T(h3) = n T(h4) = 2 pi p worst residual {worst_ident:.2e} (tol 1e-9); "
        f"orbit closure after tau worst {worst_closure:.2e} (tol 1e-7)",
    )


def test_c10_counting_bound():
    lim = math.floor(2.0 * SQRT2 * 1.0)
    brute_p1 = sum(
        1
        for q in range(1, lim + 1)
        for n in range(1, lim + 1)
        if math.gcd(1, math.gcd(q, n)) == 1
    )
    counts = {p: len(enumerate_triples(p)) for p in range(1, 51)}
    violations = [
        (p, counts[p], triple_count_bound(p))
        for p in range(1, 51)
        if counts[p] > triple_count_bound(p)
    ]
    report(
        10,
        brute_p1 == counts[1] == 4 and not violations,
        f"p=1 exhaustive count {brute_p1} (= 4); bound exceeded at "
        f"{len(violations)}/50 values of p, first {violations[0] if violations else None} "
        "(count, bound): the printed bound already fails at p = 2 where the "
        "exhaustive gcd-filtered count is 21 > 8 p phi(p) + sum phi(q) = 19",
    )


def test_c11_density_proxy():
    gaps = []
    for p_max in (4, 8, 16, 32):
        vals = [s.h_star for s in atlas(p_max) if -3.9 < s.h_star < -0.1]
        gaps.append(max(b - a for a, b in zip(vals, vals[1:])))
    ok = all(b <= a for a, b in zip(gaps, gaps[1:]))
    report(
        11,
        ok,
        "max h* gap in (-3.9, -0.1) over p_max 4,8,16,32: "
        + ", ".join(f"{g:.5f}" for g in gaps),
    )


def test_c12_bounce_algebra():
    rng = np.random.default_rng(7)
    worst = 0.0
    for c in (1.0, 0.6, 0.3):
        m = MassParams.from_ratio(c)
        for _ in range(50):
            s = State(0.4, 0.4, rng.uniform(-2, 2), rng.uniform(-2, 2))
            out = bounce_map(s, m)
            back = bounce_map(out, m)
            kin = lambda st: 0.5 * (st.p3 ** 2 / m.alpha + st.p4 ** 2 / m.beta)
            worst = max(
                worst,
                abs(back.p3 - s.p3),
                abs(back.p4 - s.p4),
                abs(out.p3 + out.p4 - s.p3 - s.p4),
                abs(kin(out) - kin(s)),
            )
    # unequal masses: reflection only on the admissible plane, else stop
    cfg = IntegrationConfig(
        dt=1e-3, t_max=2.0, sample_interval=0.05,
        collision_policy="reflect-if-admissible",
    )
    admissible = integrate_restricted(State(0.6, -0.6, 0.0, 0.0), 0.5, cfg)
    adm_ok = any(e.kind == "bounce-applied" for e in admissible.events)
    cfg2 = IntegrationConfig(
        dt=1e-3, t_max=6.0, sample_interval=0.05,
        collision_policy="reflect-if-admissible",
    )
    inadmissible = integrate_restricted(
        analytic_state(0.05, EnergyPair(-1.0, -1.3)), 0.5, cfg2
    )
    stop_ok = any(e.kind == "stop" for e in inadmissible.events) and not any(
        e.kind == "bounce-applied" for e in inadmissible.events
    )
    report(
        12,
        worst < 1e-12 and adm_ok and stop_ok,
        f"involution/momentum/kinetic worst residual {worst:.2e} (tol 1e-12); "
        f"admissible reflection applied: {adm_ok}; inadmissible stop: {stop_ok}",
    )


def test_c13_topology_classifier():
    expected = {
        -3.0: "S3-foliated-by-tori",
        -2.0: "S3-minus-4-points",
        -1.0: "S3-with-4-disc-boundaries",
        0.0: "two-cylinders-plus-four-planes",
        1.0: "cylinders-and-planes",
    }
    got = {h: classify_surface(h) for h in expected}
    report(13, got == expected, f"band probes {sorted(got.items())}")

"""Numerical time integration with collision event handling.

Three lanes:

* ``integrate_restricted`` -- the decoupled system (massless secondaries,
  velocities as momenta).  Kinetic + potential split is separable, so a
  fixed-step Stoermer-Verlet scheme is used; collisions q3 = q4 are located
  by cubic Hermite interpolation of the step and bisection, then continued
  according to the collision policy.
* ``integrate_reduced`` -- the coupled system (mu > 0) in original
  coordinates with an adaptive embedded Runge-Kutta 5(4) pair; the
  interaction is singular at collisions, so the only supported policy is to
  stop at close approach.
* ``integrate_regularized`` -- the Hamiltonian flow of the regularized
  Hamiltonian in fictitious time tau, co-integrating physical time through
  dt/dtau = alpha beta Q3^2; passages through the collision locus Q3 = 0 are
  regular points of this flow.

Each run owns its state; returned trajectories are immutable records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import (
    MassParams,
    RegState,
    State,
    bounce_map,
    hamiltonian_regularized,
    regularized_vector_field,
    vector_field_original,
)
from .errors import InvalidLevelError, StepFailureError
from .rootfind import bracketed_root

POLICIES = ("swap", "reflect-if-admissible", "stop")
METHODS = ("verlet", "rk45")
EVENT_BISECTION_CAP = 60
REDUCED_STOP_GAP = 1e-6  # close-approach gap that stops a mu > 0 run
LEVEL_TOL = 1e-8  # |L(r0)| accepted as "on the zero level"


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float = 1e-3
    t_max: float = 10.0
    method: str = "verlet"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    collision_policy: str = "swap"
    sample_interval: float = 1e-2
    event_tol: float = 1e-10  # |q3 - q4| at a polished event
    plane_tol: float = 1e-8  # |p3 + p4| flagged as a plane crossing

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_max <= 0.0:
            raise ValueError("dt and t_max must be positive")
        if min(self.abs_tol, self.rel_tol, self.event_tol, self.plane_tol) <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.sample_interval <= 0.0:
            raise ValueError("sample_interval must be positive")
        if self.collision_policy not in POLICIES:
            raise ValueError(f"unknown collision policy {self.collision_policy!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class Event:
    t: float
    kind: str  # collision | bounce-applied | plane-P-crossing | stop
    state: State


@dataclass(frozen=True)
class RegEvent:
    tau: float
    t: float
    kind: str
    state: RegState


@dataclass(frozen=True)
class Trajectory:
    times: list[float]
    states: list[State]
    events: list[Event]

    @property
    def samples(self) -> list[tuple[float, State]]:
        return list(zip(self.times, self.states))

    @property
    def final_state(self) -> State:
        return self.states[-1]


@dataclass(frozen=True)
class RegTrajectory:
    taus: np.ndarray
    states: list[RegState]
    times: np.ndarray  # physical time co-integrated along tau
    events: list[RegEvent]
    mu: float
    h: float
    masses: MassParams
    _sol: object = field(repr=False, default=None)

    @property
    def final_state(self) -> RegState:
        return self.states[-1]

    def level_values(self) -> np.ndarray:
        """|L| along the stored samples (should stay ~0)."""
        return np.array(
            [
                abs(hamiltonian_regularized(s, self.mu, self.h, self.masses))
                for s in self.states
            ]
        )

    def state_at_time(self, t_phys: float) -> tuple[float, RegState]:
        """(tau, RegState) at the given physical time, found by inverting the
        monotone co-integrated clock on the dense output."""
        if self._sol is None:
            raise ValueError("trajectory was built without dense output")
        tau_hi = float(self.taus[-1])
        if not 0.0 <= t_phys <= float(self.times[-1]):
            raise ValueError(f"t={t_phys!r} outside the integrated span")
        tau = bracketed_root(
            lambda x: float(self._sol(x)[4]) - t_phys, 0.0, tau_hi, xtol=1e-13
        )
        y = self._sol(tau)
        return tau, RegState(Q3=y[0], Q4=y[1], P3=y[2], P4=y[3])


def _axis_force(q: float) -> float:
    r = q * q + 0.25
    return -q / (r * math.sqrt(r))


def _hermite(s: float, y0: float, d0: float, y1: float, d1: float, dt: float) -> float:
    """Cubic Hermite on [0, 1] with endpoint values and derivatives."""
    s2 = s * s
    s3 = s2 * s
    return (
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * dt * d0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * dt * d1
    )


def _interp_state(s: float, t0: float, dt: float, a: State, b: State) -> tuple[float, State]:
    """Dense output inside a Verlet step: positions use the momenta as
    derivatives, momenta use the axis force (decoupled system)."""
    q3 = _hermite(s, a.q3, a.p3, b.q3, b.p3, dt)
    q4 = _hermite(s, a.q4, a.p4, b.q4, b.p4, dt)
    p3 = _hermite(s, a.p3, _axis_force(a.q3), b.p3, _axis_force(b.q3), dt)
    p4 = _hermite(s, a.p4, _axis_force(a.q4), b.p4, _axis_force(b.q4), dt)
    return t0 + s * dt, State(q3=q3, q4=q4, p3=p3, p4=p4)


def _locate_crossing(
    t0: float, dt: float, a: State, b: State, gap_tol: float
) -> tuple[float, State]:
    """Bisect the Hermite dense output of g = q3 - q4 to |g| < gap_tol."""
    lo, hi = 0.0, 1.0
    g_lo = a.q3 - a.q4
    t_ev, st = t0 + dt, b
    for _ in range(EVENT_BISECTION_CAP):
        mid = 0.5 * (lo + hi)
        t_ev, st = _interp_state(mid, t0, dt, a, b)
        g = st.q3 - st.q4
        if abs(g) < gap_tol:
            return t_ev, st
        if (g > 0.0) == (g_lo > 0.0):
            lo = mid
        else:
            hi = mid
    return t_ev, st


def integrate_restricted(s0: State, c: float, cfg: IntegrationConfig) -> Trajectory:
    """Fixed-step Stoermer-Verlet integration of the decoupled system with
    sign-change collision detection and policy handling.

    The mass ratio c sets the bounce map for unequal secondaries; the
    decoupled equations of motion themselves do not involve it.
    """
    if cfg.method != "verlet":
        raise ValueError("integrate_restricted implements the verlet method")
    masses = MassParams.from_ratio(c)
    dt = cfg.dt
    record_every = max(1, round(cfg.sample_interval / dt))

    t = 0.0
    cur = s0
    times = [0.0]
    states = [cur]
    events: list[Event] = []
    f3 = _axis_force(cur.q3)
    f4 = _axis_force(cur.q4)
    steps_done = 0
    stopped = False

    while not stopped and t < cfg.t_max - 1e-15 * cfg.t_max:
        step = min(dt, cfg.t_max - t)
        half = 0.5 * step
        p3h = cur.p3 + half * f3
        p4h = cur.p4 + half * f4
        q3 = cur.q3 + step * p3h
        q4 = cur.q4 + step * p4h
        nf3 = _axis_force(q3)
        nf4 = _axis_force(q4)
        nxt = State(q3=q3, q4=q4, p3=p3h + half * nf3, p4=p4h + half * nf4)

        g0 = cur.q3 - cur.q4
        g1 = nxt.q3 - nxt.q4
        crossed = (g0 > 0.0) != (g1 > 0.0) and g0 != 0.0 and abs(g0) > cfg.event_tol
        if crossed:
            t_ev, st_ev = _locate_crossing(t, step, cur, nxt, cfg.event_tol)
            events.append(Event(t=t_ev, kind="collision", state=st_ev))
            if abs(st_ev.p3 + st_ev.p4) < cfg.plane_tol:
                events.append(Event(t=t_ev, kind="plane-P-crossing", state=st_ev))
            policy = cfg.collision_policy
            if policy == "stop":
                events.append(Event(t=t_ev, kind="stop", state=st_ev))
                cur, t, stopped = st_ev, t_ev, True
            elif policy == "reflect-if-admissible" and masses.alpha != 0.5 and not (
                abs(st_ev.p3 + st_ev.p4) < cfg.plane_tol
            ):
                # inadmissible unequal-mass reflection: terminate, documented
                events.append(Event(t=t_ev, kind="stop", state=st_ev))
                cur, t, stopped = st_ev, t_ev, True
            else:
                if policy == "swap":
                    bounced = State(
                        q3=st_ev.q3, q4=st_ev.q4, p3=st_ev.p4, p4=st_ev.p3
                    )
                else:
                    bounced = bounce_map(st_ev, masses, tol=10.0 * cfg.event_tol)
                events.append(Event(t=t_ev, kind="bounce-applied", state=bounced))
                cur, t = bounced, t_ev
                f3 = _axis_force(cur.q3)
                f4 = _axis_force(cur.q4)
        else:
            cur, t = nxt, t + step
            f3, f4 = nf3, nf4

        steps_done += 1
        if steps_done % record_every == 0 or stopped or t >= cfg.t_max - 1e-15 * cfg.t_max:
            if t > times[-1]:
                times.append(t)
                states.append(cur)

    return Trajectory(times=times, states=states, events=events)


def detect_collisions(
    traj: Trajectory,
    event_tol: float = 1e-10,
    plane_tol: float = 1e-8,
) -> list[Event]:
    """Scan sampled (t, State) pairs of a decoupled-system trajectory for
    sign changes of q3 - q4 and refine each bracket on the cubic Hermite
    dense output; crossings with |p3 + p4| below plane_tol are additionally
    flagged as plane crossings."""
    out: list[Event] = []
    for i in range(len(traj.times) - 1):
        a, b = traj.states[i], traj.states[i + 1]
        g0 = a.q3 - a.q4
        g1 = b.q3 - b.q4
        # a bracket starting on the collision set is the event just handled
        if abs(g0) <= event_tol or (g0 > 0.0) == (g1 > 0.0):
            continue
        dt = traj.times[i + 1] - traj.times[i]
        t_ev, st = _locate_crossing(traj.times[i], dt, a, b, event_tol)
        out.append(Event(t=t_ev, kind="collision", state=st))
        if abs(st.p3 + st.p4) < plane_tol:
            out.append(Event(t=t_ev, kind="plane-P-crossing", state=st))
    return out


def integrate_reduced(s0: State, m: MassParams, cfg: IntegrationConfig) -> Trajectory:
    """Adaptive RK 5(4) integration of the coupled system in original
    coordinates.  The interaction diverges at q3 = q4, so the run terminates
    at close approach (gap below REDUCED_STOP_GAP) with a stop event."""
    if cfg.method != "rk45":
        raise ValueError("integrate_reduced implements the rk45 method")
    if cfg.collision_policy != "stop":
        raise ValueError("the coupled system supports only the stop policy")

    def rhs(t, y):
        d = vector_field_original(State(*y), m)
        return (d.q3, d.q4, d.p3, d.p4)

    gap0 = s0.q3 - s0.q4

    def approach(t, y):
        return abs(y[0] - y[1]) - REDUCED_STOP_GAP

    approach.terminal = True
    approach.direction = -1.0

    n_samples = max(2, int(cfg.t_max / cfg.sample_interval) + 1)
    sol = solve_ivp(
        rhs,
        (0.0, cfg.t_max),
        s0.as_array(),
        method="RK45",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        t_eval=np.linspace(0.0, cfg.t_max, n_samples),
        events=[approach] if abs(gap0) > REDUCED_STOP_GAP else [],
        dense_output=False,
    )
    if sol.status == -1:
        raise StepFailureError(sol.message)
    times = list(sol.t)
    states = [State(*sol.y[:, j]) for j in range(sol.y.shape[1])]
    events: list[Event] = []
    if sol.status == 1:
        t_ev = float(sol.t_events[0][0])
        st = State(*sol.y_events[0][0])
        events.append(Event(t=t_ev, kind="collision", state=st))
        events.append(Event(t=t_ev, kind="stop", state=st))
        if not times or t_ev > times[-1]:
            times.append(t_ev)
            states.append(st)
    return Trajectory(times=times, states=states, events=events)


def integrate_regularized(
    r0: RegState, mu: float, h: float, m: MassParams, cfg: IntegrationConfig
) -> RegTrajectory:
    """Hamiltonian flow of the regularized Hamiltonian in fictitious time.

    cfg.t_max is the tau span.  The initial condition must sit on the zero
    level of L within LEVEL_TOL; physical time is co-integrated through
    dt/dtau = alpha beta Q3^2, and each passage through Q3 = 0 is recorded
    as a (regular) collision event.
    """
    if cfg.method != "rk45":
        raise ValueError("integrate_regularized implements the rk45 method")
    level = hamiltonian_regularized(r0, mu, h, m)
    if abs(level) > LEVEL_TOL:
        raise InvalidLevelError(
            f"|L(r0)| = {abs(level):.3e} exceeds {LEVEL_TOL:g}; "
            "initial condition is off the zero energy level"
        )

    ab = m.alpha * m.beta

    def rhs(tau, y):
        d = regularized_vector_field(RegState(y[0], y[1], y[2], y[3]), h, m)
        return (d.Q3, d.Q4, d.P3, d.P4, ab * y[0] * y[0])

    def crossing(tau, y):
        return y[0]

    crossing.terminal = False

    n_samples = max(2, int(cfg.t_max / cfg.sample_interval) + 1)
    sol = solve_ivp(
        rhs,
        (0.0, cfg.t_max),
        np.append(r0.as_array(), 0.0),
        method="RK45",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        t_eval=np.linspace(0.0, cfg.t_max, n_samples),
        events=[crossing],
        dense_output=True,
    )
    if sol.status == -1:
        raise StepFailureError(sol.message)
    states = [RegState(*sol.y[:4, j]) for j in range(sol.y.shape[1])]
    events = [
        RegEvent(
            tau=float(tau_ev),
            t=float(y_ev[4]),
            kind="collision",
            state=RegState(*y_ev[:4]),
        )
        for tau_ev, y_ev in zip(sol.t_events[0], sol.y_events[0])
    ]
    return RegTrajectory(
        taus=sol.t,
        states=states,
        times=sol.y[4],
        events=events,
        mu=mu,
        h=h,
        masses=m,
        _sol=sol.sol,
    )

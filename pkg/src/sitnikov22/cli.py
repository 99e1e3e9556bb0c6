"""Command-line interface.

Every command echoes its parameters and emits a machine-readable payload:

* ``human`` -- aligned key/value lines, 12 significant digits;
* ``csv``   -- header row, comma separated, ``.`` decimal, ``\\n`` newlines,
  17 significant digits (events, when present, follow a ``# events`` line);
* ``json``  -- one object with ``command``, ``params``, ``result``, ``meta``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 numerical failure.  The environment variable ``SITNIKOV_TOL`` overrides
the default verification tolerance (1e-10).  ``--plot FILE`` renders a
figure to FILE alongside the data output; output stays non-interactive.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import __version__
from .dynamics import (
    MassParams,
    RegState,
    State,
    bounce_map,
    hamiltonian_regularized,
    hamiltonian_reduced,
    hamiltonian_restricted,
    partial_energies,
    rho_inverse,
    symplectic_defect,
)
from .elliptic import (
    complete_E,
    complete_K,
    jacobi,
    jacobi_epsilon,
    third_kind_lawden,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidLevelError,
    NotAtCollisionError,
    StepFailureError,
)
from .integrators import (
    IntegrationConfig,
    integrate_reduced,
    integrate_regularized,
    integrate_restricted,
)
from .resonance import (
    atlas,
    classify_surface,
    enumerate_triples,
    rational_point_check,
)
from .solution import (
    EnergyPair,
    action_J,
    analytic_state,
    modulus_from_energy,
    nu_of_time,
    period_T,
    period_over_2pi_heuman,
    q_max,
    time_of_nu,
)

PAPER_PERIOD_RATIO = 0.824429907123718  # published T(-1)/(2 pi) estimate
DEFAULT_TOL = 1e-10

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


# ----------------------------------------------------------------------
# Output helpers.
# ----------------------------------------------------------------------

def _fmt_machine(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _fmt_human(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _emit(payload: dict, fmt: str, started: float) -> None:
    payload["meta"]["wall_time_s"] = time.perf_counter() - started
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
        return
    result = payload["result"]
    if fmt == "csv":
        if "columns" in result:
            print(",".join(result["columns"]))
            for row in result["rows"]:
                print(",".join(_fmt_machine(v) for v in row))
            for section, rows in result.get("extra_sections", []):
                print(f"# {section}")
                for row in rows:
                    print(",".join(_fmt_machine(v) for v in row))
        else:
            keys = list(result)
            print(",".join(keys))
            print(",".join(_fmt_machine(result[k]) for k in keys))
        return
    # human
    for key, value in payload["params"].items():
        print(f"{key} = {_fmt_human(value)}")
    if "columns" in result:
        print("  ".join(result["columns"]))
        for row in result["rows"]:
            print("  ".join(_fmt_human(v) for v in row))
        for section, rows in result.get("extra_sections", []):
            print(f"[{section}]")
            for row in rows:
                print("  ".join(_fmt_human(v) for v in row))
    else:
        for key, value in result.items():
            print(f"{key} = {_fmt_human(value)}")


def _payload(command: str, params: dict, result: dict, tol_estimate: float | None = None) -> dict:
    meta = {"version": __version__}
    if tol_estimate is not None:
        meta["tolerance_estimate"] = tol_estimate
    return {"command": command, "params": params, "result": result, "meta": meta}


def _period_tol_estimate(h: float) -> float:
    # heuristic conditioning of the third-kind evaluation as h -> 0
    return 2e-15 * (1.0 + 2.0 / abs(h))


# ----------------------------------------------------------------------
# Commands.
# ----------------------------------------------------------------------

def _cmd_period(args) -> int:
    started = time.perf_counter()
    h = args.h
    value = period_T(h)
    result = {
        "T": value,
        "T_over_2pi": value / (2.0 * math.pi),
        "k": modulus_from_energy(h),
    }
    _emit(
        _payload("period", {"h": h}, result, _period_tol_estimate(h)),
        args.format,
        started,
    )
    return EXIT_OK


def _cmd_action(args) -> int:
    started = time.perf_counter()
    h = args.h
    result = {"J": action_J(h), "k": modulus_from_energy(h)}
    _emit(_payload("action", {"h": h}, result, _period_tol_estimate(h)), args.format, started)
    return EXIT_OK


def _cmd_qmax(args) -> int:
    started = time.perf_counter()
    h = args.h
    result = {"q_max": q_max(h), "k": modulus_from_energy(h)}
    _emit(_payload("qmax", {"h": h}, result, 1e-15), args.format, started)
    return EXIT_OK


def _cmd_solve(args) -> int:
    started = time.perf_counter()
    ep = EnergyPair(args.h3, args.h4)
    nu0 = (args.nu0[0], args.nu0[1])
    n = max(2, int(round(args.t_max / args.dt_out)) + 1)
    columns = ["t", "q3", "p3", "q4", "p4", "h3", "h4"]
    rows = []
    times = []
    states = []
    for i in range(n):
        t = min(i * args.dt_out, args.t_max)
        s = analytic_state(t, ep, nu0)
        e3, e4 = partial_energies(s)
        rows.append([t, s.q3, s.p3, s.q4, s.p4, e3, e4])
        times.append(t)
        states.append(s)
    params = {
        "h3": args.h3,
        "h4": args.h4,
        "nu0_3": nu0[0],
        "nu0_4": nu0[1],
        "t_max": args.t_max,
        "dt_out": args.dt_out,
    }
    if args.plot:
        from .plotting import save_trajectory_figure

        save_trajectory_figure(times, states, args.plot, title="analytic solution")
    _emit(_payload("solve", params, {"columns": columns, "rows": rows}, 1e-10), args.format, started)
    return EXIT_OK


def _build_initial_state(args) -> State:
    if args.state is not None:
        vals = [float(x) for x in args.state.split(",")]
        if len(vals) != 4:
            raise DomainError("--state needs q3,q4,p3,p4")
        return State(*vals)
    ep = EnergyPair(args.h3, args.h4)
    return analytic_state(0.0, ep, (args.nu0[0], args.nu0[1]))


def _cmd_integrate(args) -> int:
    started = time.perf_counter()
    if args.mu > 0.0 and not args.regularized and args.policy != "stop":
        print(
            "error: mu > 0 in original coordinates is singular at collisions; "
            "use --regularized or --policy stop",
            file=sys.stderr,
        )
        return EXIT_USAGE
    s0 = _build_initial_state(args)
    m = MassParams.from_ratio(args.c, args.mu)
    params = {
        "c": args.c,
        "mu": args.mu,
        "policy": args.policy,
        "t_max": args.t_max,
        "dt": args.dt,
        "dt_out": args.dt_out,
        "regularized": args.regularized,
        "q3_0": s0.q3,
        "q4_0": s0.q4,
        "p3_0": s0.p3,
        "p4_0": s0.p4,
    }

    if args.regularized:
        # inputs use the decoupled convention (velocities); the regularized
        # chart needs momenta p_i = m_i v_i and the matching energy level
        s_red = State(s0.q3, s0.q4, m.alpha * s0.p3, m.beta * s0.p4)
        r0 = rho_inverse(s_red, m)
        h_run = hamiltonian_reduced(s_red, m)
        cfg = IntegrationConfig(
            dt=args.dt,
            t_max=args.t_max,
            method="rk45",
            rel_tol=args.rtol,
            abs_tol=args.atol,
            collision_policy=args.policy,
            sample_interval=args.dt_out,
        )
        reg = integrate_regularized(r0, args.mu, h_run, m, cfg)
        columns = ["tau", "t", "Q3", "Q4", "P3", "P4", "absL"]
        rows = [
            [
                float(tau),
                float(t),
                s.Q3,
                s.Q4,
                s.P3,
                s.P4,
                abs(hamiltonian_regularized(s, args.mu, h_run, m)),
            ]
            for tau, t, s in zip(reg.taus, reg.times, reg.states)
        ]
        events = [["tau", "t", "kind", "Q3", "Q4", "P3", "P4"]] + [
            [ev.tau, ev.t, ev.kind, ev.state.Q3, ev.state.Q4, ev.state.P3, ev.state.P4]
            for ev in reg.events
        ]
        params["h_level"] = h_run
        if args.plot:
            from .plotting import save_regularized_figure

            save_regularized_figure(reg, args.plot, title="regularized flow")
        result = {"columns": columns, "rows": rows, "extra_sections": [["events", events]]}
        _emit(_payload("integrate", params, result, args.rtol), args.format, started)
        return EXIT_OK

    cfg = IntegrationConfig(
        dt=args.dt,
        t_max=args.t_max,
        method="verlet" if args.mu == 0.0 else "rk45",
        rel_tol=args.rtol,
        abs_tol=args.atol,
        collision_policy=args.policy,
        sample_interval=args.dt_out,
    )
    if args.mu == 0.0:
        traj = integrate_restricted(s0, args.c, cfg)
    else:
        traj = integrate_reduced(s0, m, cfg)
    columns = ["t", "q3", "p3", "q4", "p4"]
    rows = [[t, s.q3, s.p3, s.q4, s.p4] for t, s in zip(traj.times, traj.states)]
    events = [["t", "kind", "q3", "p3", "q4", "p4"]] + [
        [ev.t, ev.kind, ev.state.q3, ev.state.p3, ev.state.q4, ev.state.p4]
        for ev in traj.events
    ]
    if args.plot:
        from .plotting import save_trajectory_figure

        save_trajectory_figure(
            traj.times, traj.states, args.plot, events=traj.events, title="integrated orbit"
        )
    result = {"columns": columns, "rows": rows, "extra_sections": [["events", events]]}
    _emit(_payload("integrate", params, result, cfg.rel_tol), args.format, started)
    return EXIT_OK


def _cmd_resonances(args) -> int:
    started = time.perf_counter()
    surfaces = atlas(args.p_max)
    n_triples = sum(len(enumerate_triples(p)) for p in range(1, args.p_max + 1))
    columns = ["p", "q", "n", "h3", "h4", "h_star", "tau"]
    rows = [
        [s.triple.p, s.triple.q, s.triple.n, s.h3, s.h4, s.h_star, s.tau]
        for s in surfaces
    ]
    if args.plot:
        from .plotting import save_atlas_figure

        save_atlas_figure(surfaces, args.plot, title=f"atlas p <= {args.p_max}")
    payload = _payload(
        "resonances", {"p_max": args.p_max}, {"columns": columns, "rows": rows}, 1e-10
    )
    payload["meta"]["n_triples"] = n_triples
    payload["meta"]["n_surfaces"] = len(surfaces)
    _emit(payload, args.format, started)
    return EXIT_OK


def _cmd_classify(args) -> int:
    started = time.perf_counter()
    label = classify_surface(args.h)
    _emit(_payload("classify", {"h": args.h}, {"label": label}), args.format, started)
    return EXIT_OK


def _cmd_check_rational(args) -> int:
    started = time.perf_counter()
    triple = rational_point_check(args.h3, args.h4, args.qmax, tol=args.tol)
    result = {
        "T3_over_2pi": period_T(args.h3) / (2.0 * math.pi),
        "T4_over_2pi": period_T(args.h4) / (2.0 * math.pi),
        "found": triple is not None,
        "p": triple.p if triple else None,
        "q": triple.q if triple else None,
        "n": triple.n if triple else None,
    }
    params = {"h3": args.h3, "h4": args.h4, "qmax": args.qmax, "tol": args.tol}
    _emit(_payload("check-rational", params, result, args.tol), args.format, started)
    return EXIT_OK


# ----------------------------------------------------------------------
# Verification suite.
# ----------------------------------------------------------------------

def _verification_checks(tol_override: float | None):
    """Yield (name, residual, tolerance) for the invariant suite."""

    def tol(default: float) -> float:
        return tol_override if tol_override is not None else default

    # closed-form period against the published value
    yield (
        "period-paper-value",
        abs(period_T(-1.0) / (2.0 * math.pi) - PAPER_PERIOD_RATIO),
        tol(1e-12),
    )
    yield (
        "period-limit-at-minus-2",
        abs(period_T(-2.0 + 1e-8) - math.pi / math.sqrt(2.0)),
        tol(1e-6),
    )
    grid = [-1.999 + 1.988 * i / 99 for i in range(100)]
    periods = [period_T(h) for h in grid]
    worst = min(b - a for a, b in zip(periods, periods[1:]))
    yield ("period-monotonicity", max(0.0, -worst), tol(0.0))
    k = 0.3
    kp = math.sqrt(1.0 - k * k)
    legendre = abs(
        complete_E(k) * complete_K(kp)
        + complete_E(kp) * complete_K(k)
        - complete_K(k) * complete_K(kp)
        - math.pi / 2.0
    )
    yield ("legendre-relation", legendre, tol(1e-12))
    worst = 0.0
    for i in range(7):
        kk = 0.1 * (i + 0.5)
        for j in range(8):
            nu = 0.7 * j
            sn, cn, dn = jacobi(nu, kk)
            worst = max(
                worst,
                abs(sn * sn + cn * cn - 1.0),
                abs(dn * dn + (kk * sn) ** 2 - 1.0),
            )
    yield ("jacobi-identities", worst, tol(1e-12))
    h0, d = -1.2, 1e-6
    dj = (action_J(h0 + d) - action_J(h0 - d)) / (2.0 * d)
    yield ("action-derivative", abs(dj - period_T(h0) / (2.0 * math.pi)), tol(1e-6))
    k = 0.45
    yield (
        "time-map-period",
        abs(time_of_nu(4.0 * complete_K(k), k) - period_T(4.0 * k * k - 2.0)),
        tol(1e-10),
    )
    a = 2.0 * k * k
    zeta = abs(
        third_kind_lawden(complete_K(k), a, k)
        - (complete_K(k) * jacobi_epsilon(a, k) - a * complete_E(k))
    )
    yield ("third-kind-zeta-identity", zeta, tol(1e-11))
    yield (
        "period-form-equivalence",
        abs(period_over_2pi_heuman(-0.8) - period_T(-0.8) / (2.0 * math.pi)),
        tol(1e-10),
    )
    m = MassParams.from_ratio(0.6)
    yield (
        "symplectic-defect",
        symplectic_defect(RegState(0.7, -0.3, 1.1, 0.4), m),
        tol(1e-9),
    )
    s = State(0.2, 0.2, 0.9, -0.4)
    twice = bounce_map(bounce_map(s, m, tol=1.0), m, tol=1.0)
    kin = lambda st: 0.5 * (st.p3 ** 2 / m.alpha + st.p4 ** 2 / m.beta)  # noqa: E731
    yield (
        "bounce-involution",
        max(
            abs(twice.p3 - s.p3),
            abs(twice.p4 - s.p4),
            abs(kin(bounce_map(s, m, tol=1.0)) - kin(s)),
        ),
        tol(1e-12),
    )
    ep = EnergyPair(-1.1, -0.7)
    drift = abs(
        hamiltonian_restricted(analytic_state(1.234, ep), 1.0) - ep.total
    )
    yield ("analytic-energy-conservation", drift, tol(1e-10))


def _cmd_verify(args) -> int:
    started = time.perf_counter()
    env_tol = os.environ.get("SITNIKOV_TOL")
    tol_override = args.tol if args.tol is not None else (
        float(env_tol) if env_tol else None
    )
    failures = []
    rows = []
    for name, residual, tolerance in _verification_checks(tol_override):
        if args.inject_error and args.inject_error == name:
            residual += 1e-3
        ok = residual <= tolerance
        rows.append(
            {"invariant": name, "residual": residual, "tolerance": tolerance, "passed": ok}
        )
        if not ok:
            failures.append(name)
    if args.format == "json":
        payload = _payload(
            "verify",
            {"tol": tol_override, "default_tol": DEFAULT_TOL},
            {"checks": rows, "failures": failures},
        )
        payload["meta"]["wall_time_s"] = time.perf_counter() - started
        print(json.dumps(payload, sort_keys=True))
    else:
        for row in rows:
            status = "PASS" if row["passed"] else "FAIL"
            print(
                f"{status} {row['invariant']}: residual {row['residual']:.3e} "
                f"(tolerance {row['tolerance']:.3e})"
            )
        if failures:
            print("failed invariants: " + ", ".join(failures))
    return EXIT_VERIFY if failures else EXIT_OK


# ----------------------------------------------------------------------
# Parser and dispatch.
# ----------------------------------------------------------------------

def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--format",
        choices=("human", "csv", "json"),
        default="human",
        help="output format (default: human)",
    )


def _energy_value(text: str) -> float:
    value = float(text)
    if not -2.0 < value < 0.0:
        raise argparse.ArgumentTypeError(
            f"energy {value!r} outside the bound-orbit interval (-2, 0)"
        )
    return value


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated values")
    return (float(parts[0]), float(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sitnikov22",
        description="Circular double (2+2) Sitnikov problem toolbox",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("period", help="period T(h) of one secondary")
    p.add_argument("--h", type=_energy_value, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_period)

    p = sub.add_parser("action", help="action J(h) of the closed orbit")
    p.add_argument("--h", type=_energy_value, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_action)

    p = sub.add_parser("qmax", help="turning point of the oscillation")
    p.add_argument("--h", type=_energy_value, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_qmax)

    p = sub.add_parser("solve", help="sample the closed-form solution")
    p.add_argument("--h3", type=_energy_value, required=True)
    p.add_argument("--h4", type=_energy_value, required=True)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--dt-out", type=float, default=0.1)
    p.add_argument("--nu0", type=_pair, default=(0.0, 0.0), help="initial elliptic arguments")
    p.add_argument("--plot", help="write a figure to this file")
    _add_format(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("integrate", help="numerical integration with collision handling")
    p.add_argument("--h3", type=_energy_value)
    p.add_argument("--h4", type=_energy_value)
    p.add_argument("--nu0", type=_pair, default=(0.0, 0.0))
    p.add_argument("--state", help="explicit q3,q4,p3,p4 initial state")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--regularized", action="store_true")
    p.add_argument("--policy", choices=("swap", "reflect-if-admissible", "stop"), default="swap")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--dt-out", type=float, default=0.1)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--plot", help="write a figure to this file")
    _add_format(p)
    p.set_defaults(func=_cmd_integrate)

    p = sub.add_parser("resonances", help="atlas of resonant energy surfaces")
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--plot", help="write a figure to this file")
    _add_format(p)
    p.set_defaults(func=_cmd_resonances)

    p = sub.add_parser("classify", help="topology of the energy level H = h")
    p.add_argument("--h", type=float, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("check-rational", help="recover a resonance triple from energies")
    p.add_argument("--h3", type=_energy_value, required=True)
    p.add_argument("--h4", type=_energy_value, required=True)
    p.add_argument("--qmax", type=int, default=10**4)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_format(p)
    p.set_defaults(func=_cmd_check_rational)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--tol", type=float, default=None, help="override every tolerance")
    p.add_argument("--inject-error", help=argparse.SUPPRESS)
    _add_format(p)
    p.set_defaults(func=_cmd_verify)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help/--version
        return int(exc.code or 0)
    try:
        if args.command == "integrate" and args.state is None and (
            args.h3 is None or args.h4 is None
        ):
            print("error: give --h3/--h4 or --state", file=sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc} (bound orbits need h in (-2, 0))", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidLevelError, NotAtCollisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StepFailureError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def console_main() -> None:
    raise SystemExit(main())

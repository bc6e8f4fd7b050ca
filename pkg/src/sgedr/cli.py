"""Command-line front end.

Subcommands: lw, region, experiment, validate, tau-opt.  Exit codes:
0 success, 2 validation failure, 3 I/O error, 4 bad arguments.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .experiment import (
    ExperimentConfig1922,
    format_table,
    parse_config,
    reference_checks,
    report_to_json,
    run_chain,
)
from .measurement import LWParams, lund_wiseman, qrms_disturbance, qrms_error
from .probe import GaussianProbe
from .sgmodel import (
    INFINITE,
    SGParams,
    error_sq,
    error_sq_limit,
    in_region,
    optimal_tau,
    region_bound,
    sweep_region,
    tau_condition,
)
from .spin import STATE_SY_PLUS, PauliObservable
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_USAGE = 4

SCHEMA_VERSION = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_csv(path: str, command: str, header: list[str], rows: list[tuple]) -> None:
    lines = [f"# sgedr {command} schema v{SCHEMA_VERSION}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_json(path: str, payload: dict) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_range(spec: str) -> tuple[float, float]:
    lo, _, hi = spec.partition(":")
    return float(lo), float(hi)


def cmd_lw(args) -> int:
    n = args.steps
    if n < 2:
        raise _UsageError("--steps must be >= 2")
    state = STATE_SY_PLUS
    sz, sx = PauliObservable.z(), PauliObservable.x()
    rows = []
    for theta in np.linspace(0.0, np.pi / 2.0, n):
        mp = lund_wiseman(LWParams(float(theta)))
        eps = qrms_error(mp, state, sz)
        eta = qrms_disturbance(mp, state, sx)
        eps_sq, eta_sq = eps * eps, eta * eta
        tight_lhs = (eps_sq - 2.0) ** 2 + (eta_sq - 2.0) ** 2
        rows.append((float(theta), eps, eta, eps_sq, eta_sq, tight_lhs, eps * eta))
    header = ["theta", "eps", "eta", "eps_sq", "eta_sq", "tight_lhs", "heisenberg_lhs"]
    if args.format == "csv":
        _write_csv(args.out, "lw", header, rows)
    else:
        _write_json(args.out, {
            "schema": SCHEMA_VERSION,
            "command": "lw",
            "rows": [dict(zip(header, r)) for r in rows],
        })
    return EXIT_OK


def cmd_region(args) -> int:
    steps = args.steps
    if steps < 1:
        raise _UsageError("--steps must be >= 1")
    lre_lo, lre_hi = _parse_range(args.lambda_re)
    lim_lo, lim_hi = _parse_range(args.lambda_im)
    b0_lo, b0_hi = _parse_range(args.b0)
    tau_lo, tau_hi = _parse_range(args.tau)
    if lre_lo <= 0.0:
        raise _UsageError("Re(lambda) range must be positive")
    if tau_lo < 0.0:
        raise _UsageError("tau range must be nonnegative")

    base = SGParams(mu=1.0, B0=0.0, B1=args.b1, mass=1.0, hbar=1.0, dt=1.0)
    lambdas = [
        complex(re, im)
        for re in np.linspace(lre_lo, lre_hi, steps)
        for im in np.linspace(lim_lo, lim_hi, steps)
    ]
    points = sweep_region(
        base,
        lambdas,
        np.linspace(b0_lo, b0_hi, steps),
        np.linspace(tau_lo, tau_hi, steps),
    )
    rows = []
    for pt in points:
        tight_ok = (pt.eps_sq - 2.0) ** 2 + (pt.eta_sq - 2.0) ** 2 <= 4.0 + 1e-9
        heis_violated = np.sqrt(pt.eps_sq * pt.eta_sq) < 1.0  # D = 1 state
        rows.append((pt.eps_sq, pt.eta_sq, in_region(pt), bool(tight_ok), bool(heis_violated)))
    boundary = [
        (float(e), region_bound(float(e))) for e in np.linspace(0.0, 4.0, 1024)
    ]
    header = ["eps_sq", "eta_sq", "in_region", "tight_ok", "heisenberg_violated"]
    bheader = ["eps_sq", "max_abs_half_two_minus_eta_sq"]
    if args.format == "csv":
        _write_csv(args.out, "region", header, rows)
        bpath = args.out if args.out == "-" else args.out + ".boundary.csv"
        _write_csv(bpath, "region-boundary", bheader, boundary)
    else:
        _write_json(args.out, {
            "schema": SCHEMA_VERSION,
            "command": "region",
            "rows": [dict(zip(header, r)) for r in rows],
            "boundary": [dict(zip(bheader, b)) for b in boundary],
        })
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.config is not None:
        cfg, k_from_file = parse_config(args.config)
    else:
        cfg, k_from_file = ExperimentConfig1922(), None
    flags_given = any(v is not None for v in (args.k_min, args.k_max, args.k_steps))
    if k_from_file is None or flags_given:
        k_min = args.k_min if args.k_min is not None else 0.6
        k_max = args.k_max if args.k_max is not None else 1.0
        k_steps = args.k_steps if args.k_steps is not None else 2
        if k_steps == 1:
            k_values: tuple[float, ...] = (k_min,)
        else:
            k_values = tuple(float(x) for x in np.linspace(k_min, k_max, k_steps))
    else:
        k_values = k_from_file

    report = run_chain(cfg, k_values=k_values)
    print(format_table(report))
    print()
    print(report_to_json(report))

    if cfg != ExperimentConfig1922():
        return EXIT_OK  # reference values only apply to the default setup
    checks = reference_checks(report, cfg=cfg)
    bad = [(name, got, want) for name, got, want, ok in checks if not ok]
    if bad:
        print("\nreference cross-checks FAILED for:", file=sys.stderr)
        for name, got, want in bad:
            print(f"  {name}: computed {got:.6g}, reference {want:.6g}", file=sys.stderr)
        return EXIT_VALIDATION
    print("\nall reference cross-checks passed")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_validation(n=args.grid_n, steps=args.dt_steps)
    all_ok = True
    for r in results:
        c = r.case
        status = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(
            f"lam={c.lam} muB1={c.mu_b1} B0={c.b0} tau={c.tau}: "
            f"|d eps^2|={r.eps_rel:.3e} |d eta^2|={r.eta_rel:.3e} {status}"
        )
    return EXIT_OK if all_ok else EXIT_VALIDATION


def cmd_tau_opt(args) -> int:
    probe = GaussianProbe(args.lambda_re, args.lambda_im, hbar=1.0, mass=1.0)
    p = SGParams(mu=1.0, B0=0.0, B1=args.b1, mass=1.0, hbar=1.0, dt=args.dt)
    has_min = tau_condition(p, probe)
    tau0 = optimal_tau(p, probe)
    if tau0 is INFINITE:
        print("no finite minimizer; error decreases toward the free-flight limit")
        print(f"limit eps^2 = {error_sq_limit(p, probe):.17g}")
        tau_grid = np.geomspace(1e-3, 1e3, args.steps) * p.dt
    else:
        print(f"condition holds: {has_min}; tau0 = {tau0:.17g}")
        at_tau0 = error_sq(
            SGParams(mu=1.0, B0=0.0, B1=args.b1, mass=1.0, hbar=1.0, dt=args.dt, tau=tau0),
            probe,
        )
        print(f"eps^2(tau0) = {at_tau0:.17g}")
        tau_grid = np.linspace(0.0, 10.0 * tau0, args.steps)
    rows = []
    for tau in tau_grid:
        q = SGParams(mu=1.0, B0=0.0, B1=args.b1, mass=1.0, hbar=1.0, dt=args.dt, tau=float(tau))
        rows.append((float(tau), error_sq(q, probe)))
    if args.format == "csv":
        _write_csv(args.out, "tau-opt", ["tau", "eps_sq"], rows)
    else:
        _write_json(args.out, {
            "schema": SCHEMA_VERSION,
            "command": "tau-opt",
            "tau0": None if tau0 is INFINITE else tau0,
            "rows": [{"tau": t, "eps_sq": e} for t, e in rows],
        })
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="sgedr", description=__doc__)
    parser.add_argument("--version", action="version", version=f"sgedr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_lw = sub.add_parser("lw", help="CNOT-model error/disturbance sweep over theta")
    p_lw.add_argument("--steps", type=int, default=101)
    add_io(p_lw)
    p_lw.set_defaults(func=cmd_lw)

    p_region = sub.add_parser("region", help="achievable error-disturbance region sweep")
    p_region.add_argument("--steps", type=int, default=8, help="steps per parameter axis")
    p_region.add_argument("--b1", type=float, default=3.0)
    p_region.add_argument("--lambda-re", default="0.25:4.0", help="range lo:hi")
    p_region.add_argument("--lambda-im", default="-2.0:2.0", help="range lo:hi")
    p_region.add_argument("--b0", default="0.0:2.0", help="range lo:hi")
    p_region.add_argument("--tau", default="0.0:2.0", help="range lo:hi")
    add_io(p_region)
    p_region.set_defaults(func=cmd_region)

    p_exp = sub.add_parser("experiment", help="1922 experiment calculation chain")
    p_exp.add_argument("--config", default=None, help="key = value config file")
    p_exp.add_argument("--k-min", type=float, default=None)
    p_exp.add_argument("--k-max", type=float, default=None)
    p_exp.add_argument("--k-steps", type=int, default=None)
    p_exp.set_defaults(func=cmd_experiment)

    p_val = sub.add_parser("validate", help="grid oracle vs closed forms")
    p_val.add_argument("--grid-n", type=int, default=1024)
    p_val.add_argument("--dt-steps", type=int, default=None)
    p_val.set_defaults(func=cmd_validate)

    p_tau = sub.add_parser("tau-opt", help="free-flight time optimization demo")
    p_tau.add_argument("--lambda-re", type=float, default=1.0)
    p_tau.add_argument("--lambda-im", type=float, default=20.0)
    p_tau.add_argument("--b1", type=float, default=100.0)
    p_tau.add_argument("--dt", type=float, default=0.01)
    p_tau.add_argument("--steps", type=int, default=200)
    add_io(p_tau)
    p_tau.set_defaults(func=cmd_tau_opt)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())

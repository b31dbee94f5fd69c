"""Command-line front end.

Each subcommand validates its parameters, runs one pipeline and writes a
CSV or JSON artifact to ``--out`` (stdout by default) plus a metadata
sidecar ``<out>.meta.json`` echoing the resolved configuration.  Without
``--out`` the metadata goes to stderr.

Exit codes: 0 success, 2 validation error, 3 resource limit, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .analysis import analyze_transient, exponent_along_isotherm
from .errors import ResourceLimitError, ValidationError
from .initial import InitialSpec, build, spec_from_dict, spec_to_dict
from .io import (
    ISOTHERM_COLUMNS,
    MASTER_COLUMNS,
    dump_json,
    trajectory_table,
    write_envelope,
    write_rows,
)
from .isotherms import DEFAULT_SAMPLES, isotherm_distributed, isotherm_localized
from .master import MasterModel, closed_form_solution, integrate_master, rates_positive
from .sweep import localized_q0_grid
from .thermo import (
    beta_distributed,
    characteristic_temperature,
    chi_from_q0,
    chi_localized_closed,
    q0_chi_distributed,
    q0_chi_localized_hadamard,
    thermo_functions,
    thermo_table,
)
from .walker import DEFAULT_MAX_SITES, HADAMARD, evolve

EXIT_OK, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_IO = 0, 2, 3, 4


@dataclass
class Output:
    """A command result: a table (header + rows), a record, or both."""

    header: list[str] | None = None
    rows: list[list[Any]] = field(default_factory=list)
    record: dict | None = None
    default_format: str = "csv"
    extra_files: dict[str, str] = field(default_factory=dict)

    def render(self, fmt: str | None) -> str:
        fmt = fmt or self.default_format
        buf = io.StringIO()
        if fmt == "json":
            if self.record is not None:
                dump_json(self.record, buf)
            else:
                dump_json([dict(zip(self.header, r)) for r in self.rows], buf)
        elif self.header is not None:
            write_rows(buf, self.header, self.rows)
        else:
            keys = sorted(k for k, v in self.record.items() if not isinstance(v, (dict, list)))
            write_rows(buf, keys, [[self.record[k] for k in keys]])
        return buf.getvalue()


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _window(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError("window must be 'lo,hi' with lo < hi")
    return vals[0], vals[1]


def _add_init_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--init", choices=["localized", "gaussian"], default="localized")
    p.add_argument("--init-json", help="initial state as a JSON record (overrides --init)")
    p.add_argument("--gamma", type=float, default=0.0, help="Bloch polar angle (radians)")
    p.add_argument("--phi", type=float, default=None,
                   help="relative phase (radians); gaussian default solves cos(phi) = tan(theta)/tan(gamma)")
    p.add_argument("--sigma0", type=float, default=10.0)
    p.add_argument("--cutoff-sites", type=int, default=None)
    p.add_argument("--theta", type=float, default=HADAMARD, help="coin angle in [0, pi/2] (radians)")


def _init_spec(args: argparse.Namespace) -> InitialSpec:
    if args.init_json:
        try:
            data = json.loads(args.init_json)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--init-json is not valid JSON: {exc}") from exc
        return spec_from_dict(data, theta=args.theta)
    data = {"kind": args.init, "gamma": args.gamma, "phi": args.phi}
    if args.init == "localized":
        data["phi"] = 0.0 if args.phi is None else args.phi
    else:
        data.update(sigma0=args.sigma0, cutoff_sites=args.cutoff_sites)
    return spec_from_dict(data, theta=args.theta)


def cmd_evolve(args: argparse.Namespace) -> Output:
    spec = _init_spec(args)
    args.resolved_init = spec_to_dict(spec)
    traj = evolve(build(spec), args.theta, args.steps, args.record_every, args.max_sites)
    header, rows = trajectory_table(traj, density=not args.no_density)
    return Output(header, rows)


def cmd_thermo(args: argparse.Namespace) -> Output:
    if args.table:
        rows = thermo_table(np.linspace(0.0, 0.25, args.table, endpoint=False))
        header = list(rows[0])
        return Output(header, [[r[k] for k in header] for r in rows])
    extra: dict[str, Any] = {}
    if args.localized:
        chi = q0_chi_localized_hadamard(args.gamma, args.phi)
        extra["chi_closed_form"] = float(chi_localized_closed(args.gamma, args.phi))
    elif args.distributed:
        chi = q0_chi_distributed(args.gamma, args.theta)
        extra["beta_distributed"] = beta_distributed(args.gamma, args.theta)
    elif args.q0 is not None:
        chi = chi_from_q0(complex(args.q0.replace(" ", "")), args.theta)
    elif args.chi is not None:
        chi = args.chi
    else:
        raise ValidationError("thermo needs one of --chi, --q0, --localized, --distributed, --table")
    rec = thermo_functions(chi).to_json()
    rec["T0"] = characteristic_temperature()
    if not isinstance(chi, float):
        rec["q0"] = chi.q0
        rec["theta"] = chi.theta
    rec.update(extra)
    return Output(record=rec, default_format="json")


def cmd_isotherms(args: argparse.Namespace) -> Output:
    levels = args.levels or ([1.0] if args.mode == "localized" else [0.5, 1.0, 2.0, 5.0])
    solve = isotherm_localized if args.mode == "localized" else isotherm_distributed
    rows = [list(r) for level in levels for r in solve(level, args.samples).rows()]
    return Output(list(ISOTHERM_COLUMNS), rows)


def cmd_transient(args: argparse.Namespace) -> Output:
    spec = _init_spec(args)
    args.resolved_init = spec_to_dict(spec)
    _, res = analyze_transient(spec, args.theta, args.steps, window=args.fit_window, w=args.peak_width)
    out = Output(record=res.to_json(), default_format="json")
    if args.envelope and res.upper is not None:
        buf = io.StringIO()
        write_envelope(buf, [res.upper, res.lower])
        out.extra_files[args.envelope] = buf.getvalue()
    return out


def cmd_exponents(args: argparse.Namespace) -> Output:
    gammas = np.linspace(0.0, math.pi, args.samples + 2)[1:-1]
    rows = exponent_along_isotherm(args.t_ratio, gammas, args.steps, args.jobs)
    header = ["gamma", "phi", "exponent_c", "amplitude_K"]
    return Output(header, [[r[k] for k in header] for r in rows])


def cmd_master(args: argparse.Namespace) -> Output:
    consts = {"K": args.K, "c": args.c, "omega": args.omega, "delta": args.delta, "d": args.d}
    if args.w_b is None:
        model = MasterModel.balanced(args.w_a, args.lambda_plus, **consts)
    else:
        model = MasterModel(w_a=args.w_a, w_b=args.w_b, lambda_plus_inf=args.lambda_plus, **consts)
    if not rates_positive(model, args.t0, args.t1):
        raise ValidationError("population rates w_{+-} = w_b + xi(t), w_{-+} = w_a - xi(t) turn negative on [t0, t1]")
    num = integrate_master(model, args.t0, args.t1, args.dt)
    closed = closed_form_solution(model, num[:, 0]).lambda_plus
    rows = [[t, lp, lc, abs(lp - lc)] for t, lp, lc in zip(num[:, 0], num[:, 1], closed)]
    return Output(list(MASTER_COLUMNS), rows)


def cmd_chigrid(args: argparse.Namespace) -> Output:
    gammas = np.linspace(0.0, math.pi, args.n)
    phis = np.linspace(0.0, 2.0 * math.pi, args.n)
    lo = args.steps - args.tail
    grid = localized_q0_grid(gammas, phis, HADAMARD, args.steps, (lo, args.steps), args.method, args.jobs)
    rows = []
    for g, p, q0, std in grid.rows():
        numeric = chi_from_q0(q0, HADAMARD).chi
        closed = float(chi_localized_closed(g, p))
        rows.append([g, p, q0.real, q0.imag, std, numeric, closed, abs(numeric - closed)])
    header = ["gamma", "phi", "re_q0", "im_q0", "q_std", "chi_numeric", "chi_closed", "abs_err"]
    return Output(header, rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--format", choices=["csv", "json"], default=None)

    parser = argparse.ArgumentParser(prog="qwthermo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common], help="simulate and write the trajectory CSV")
    _add_init_args(p)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--max-sites", type=int, default=DEFAULT_MAX_SITES)
    p.add_argument("--no-density", action="store_true", help="omit eigenvalue/entropy columns")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("thermo", parents=[common], help="thermodynamic functions for one chi")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--chi", type=float)
    mode.add_argument("--q0", help="asymptotic interference term, e.g. '0.25+0.1j'")
    mode.add_argument("--localized", action="store_true", help="closed form for a localized Hadamard start")
    mode.add_argument("--distributed", action="store_true", help="closed form for a wide Gaussian start")
    mode.add_argument("--table", type=int, metavar="N", help="N-row table of beta*eps, S0, beta*U, beta*A vs chi")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=HADAMARD)
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("isotherms", parents=[common], help="isotherm curves")
    p.add_argument("--mode", choices=["localized", "distributed"], default="localized")
    p.add_argument("--levels", type=_floats, help="T/T0 (localized) or T in eps (distributed)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_isotherms)

    p = sub.add_parser("transient", parents=[common], help="envelope power-law fit")
    _add_init_args(p)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--fit-window", type=_window, default=None, help="'lo,hi' (default t_max/10, t_max)")
    p.add_argument("--peak-width", type=int, default=2)
    p.add_argument("--envelope", help="path for the envelope CSV (branch,t,value)")
    p.set_defaults(func=cmd_transient)

    p = sub.add_parser("exponents", parents=[common], help="exponent c versus gamma along one isotherm")
    p.add_argument("--t-ratio", type=float, default=1.1)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--steps", type=int, default=20000)
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("master", parents=[common], help="master equation: RK4 vs closed form")
    p.add_argument("--w-a", type=float, default=0.2)
    p.add_argument("--w-b", type=float, default=None, help="default: from detailed balance")
    p.add_argument("--lambda-plus", type=float, default=0.5, help="equilibrium Lambda_+")
    p.add_argument("--K", type=float, default=0.05)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--d", type=float, default=0.02)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--t1", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.set_defaults(func=cmd_master)

    p = sub.add_parser("chigrid", parents=[common], help="simulated vs closed-form chi on a (gamma, phi) grid")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--tail", type=int, default=1000)
    p.add_argument("--method", choices=["basis", "direct"], default="basis")
    p.set_defaults(func=cmd_chigrid)
    return parser


def _metadata(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    return {
        "command": args.command,
        "config": config,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
    }


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise ValidationError("--jobs must be >= 1")
        result = args.func(args)
        text = result.render(args.format)
        meta = io.StringIO()
        dump_json(_metadata(args), meta)
        if args.out:
            Path(args.out).write_text(text)
            Path(args.out + ".meta.json").write_text(meta.getvalue())
        else:
            sys.stdout.write(text)
            sys.stderr.write(meta.getvalue())
        for path, body in result.extra_files.items():
            Path(path).write_text(body)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        # ValidationError and the numeric-precondition errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

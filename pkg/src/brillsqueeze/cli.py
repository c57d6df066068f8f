"""Command-line interface.

Exit codes: 0 success, 2 configuration/parameter error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from contextlib import contextmanager

from .analytic import analytic_prediction, supermode_frequencies
from .config import base_params, load_config
from .errors import ConfigError, HeatingRegimeError, NumericalError, ParameterError
from .model import SystemParams, resolve_detunings
from .observables import report_from_solution, solve_point
from .sweep import PRESETS, figure_preset, format_number, optimize_squeezing, run_sweep

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _parse_assignments(items):
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"expected NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"{name}: {value!r} is not a number") from None
    return out


def _cmd_point(args):
    params = base_params(_parse_assignments(args.set), section="--set")
    if args.no_resonance_lock and (params.Delta_1 is None or params.Delta_b is None):
        raise ConfigError("--no-resonance-lock needs explicit Delta_1 and Delta_b")
    sol = solve_point(params)
    report = report_from_solution(sol)
    eff = sol.effective
    d1, db = resolve_detunings(params, eff)
    lines = {**report.as_dict()}
    lines.update(
        r=eff.r,
        omega_m_eff=eff.omega_m_eff,
        G_c_eff=eff.G_c_eff,
        beta=eff.beta,
        N_eff=eff.N_eff,
        Delta_1=d1,
        Delta_b=db,
        linearization_ratio=eff.linearization_ratio,
    )
    plus, minus = supermode_frequencies(d1, params.G_b)
    lines.update(supermode_plus=plus, supermode_minus=minus)
    if args.analytic and report.stable:
        try:
            pred = analytic_prediction(params)
            lines.update(
                analytic_variance=pred.variance,
                gamma_c=pred.rates.gamma_c,
                kappa_eff=pred.rates.kappa_eff,
            )
        except HeatingRegimeError as exc:
            lines["analytic_variance"] = f"unavailable ({exc})"
    for key, value in lines.items():
        print(f"{key}: {format_number(value)}")
    return 0


def _write_sweep(config, args):
    result = run_sweep(config, workers=args.workers)
    with _output(args.out) as fh:
        result.to_csv(fh)
    return 0


def _cmd_sweep(args):
    return _write_sweep(load_config(args.config), args)


def _cmd_preset(args):
    return _write_sweep(figure_preset(args.name), args)


def _cmd_stability(args):
    config = dataclasses.replace(load_config(args.config), outputs=("stable", "spectral_abscissa"))
    return _write_sweep(config, args)


def _cmd_optimize(args):
    opt = optimize_squeezing(load_config(args.config), levels=args.levels, workers=args.workers)
    for name, value in opt.values.items():
        print(f"{name}: {format_number(value)}")
    print(f"variance_db: {format_number(opt.variance_db)}")
    print(f"evaluations: {opt.evaluations}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="brillsqueeze",
        description="Mechanical squeezing in a Brillouin-assisted optomechanical system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate a single parameter point")
    p.add_argument(
        "--set",
        action="append",
        metavar="NAME=VALUE",
        help=f"override a parameter ({', '.join(SystemParams.field_names())})",
    )
    p.add_argument(
        "--no-resonance-lock",
        action="store_true",
        help="require explicit Delta_1 and Delta_b instead of locking them to omega_m'",
    )
    p.add_argument("--analytic", action="store_true", help="also report the weak-coupling estimate")
    p.set_defaults(func=_cmd_point)

    def add_run_options(sp):
        sp.add_argument("--out", help="output CSV file (default stdout)")
        sp.add_argument("--workers", type=int, default=None, help="worker processes")

    p = sub.add_parser("sweep", help="grid sweep from a TOML config")
    p.add_argument("--config", required=True)
    add_run_options(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("preset", help="run a figure preset")
    p.add_argument("name", choices=sorted(PRESETS))
    add_run_options(p)
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("optimize", help="maximise the squeezing over the config axes")
    p.add_argument("--config", required=True)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("stability", help="stability map over the config grid")
    p.add_argument("--config", required=True)
    add_run_options(p)
    p.set_defaults(func=_cmd_stability)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

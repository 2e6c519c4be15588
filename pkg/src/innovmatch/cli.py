"""Command-line front end.

Data goes to stdout (or ``--output``); diagnostics go to stderr.
Exit codes: 0 ok, 2 parse error, 3 validation error, 4 numerical
failure, 5 output write failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from dataclasses import asdict
from typing import Sequence

from . import __version__
from .dynamics import SimConfig, simulate
from .equilibrium import solve_equilibrium
from .io import (
    ConfigParseError,
    ConfigValidationError,
    RunConfig,
    config_problems,
    format_cell,
    parse_config,
    to_json,
    write_csv,
)
from .model import ModelError, NumericalError, efficiency, finding_and_filling_rates
from .statics import find_threshold, linear_grid, sweep

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NUMERIC, EXIT_WRITE = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigParseError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="innovmatch", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, eta: bool = True) -> None:
        p.add_argument("--config", help="JSON file or inline JSON object (default: baseline calibration)")
        if eta:
            p.add_argument("--eta", type=float, help="research cost; overrides config eta")
        p.add_argument("-o", "--output", help="write data here instead of stdout")

    p = sub.add_parser("solve", help="steady-state equilibrium at one point")
    common(p)
    p.add_argument("--csv", action="store_true", help="CSV row instead of JSON")

    p = sub.add_parser("sweep", help="equilibria over a one-dimensional grid (CSV)")
    common(p)
    p.add_argument("--var", required=True, choices=("eta", "gamma", "tau_f"))
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="N intervals, N+1 points")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("threshold", help="research-cost threshold (JSON)")
    common(p, eta=False)

    p = sub.add_parser("simulate", help="agent-based Monte Carlo at the analytic tightness")
    common(p)
    p.add_argument("--workers", type=int, default=10_000)
    p.add_argument("--periods", type=int, default=2_000)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--initial-u", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--csv", action="store_true", help="one-row CSV summary instead of JSON")
    p.add_argument("--path-csv", help="also write the per-period mean path to this file")

    p = sub.add_parser("validate", help="check a config and flag rate overflow")
    common(p)
    return ap


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _eta(cfg: RunConfig, args, required: bool = True) -> float | None:
    eta = args.eta if getattr(args, "eta", None) is not None else cfg.eta
    if eta is None and required:
        raise ConfigValidationError(["eta is required (set it in the config or pass --eta)"])
    if eta is not None:
        problems = config_problems(cfg, eta)
        if problems:
            raise ConfigValidationError(problems)
    return eta


def _overflow_warning(report) -> None:
    if report.rate_overflow:
        _warn(
            f"rate overflow at eta={report.eta:g}: p={report.p_star:.6g}, "
            f"q={report.q_star:.6g} (a rate above 1 is not a probability)"
        )


def _cmd_solve(cfg: RunConfig, args) -> str:
    eta = _eta(cfg, args)
    report = solve_equilibrium(cfg.model, cfg.efficiency, cfg.policy, eta)
    _overflow_warning(report)
    if args.csv:
        buf = io.StringIO()
        write_csv(report, buf)
        return buf.getvalue()
    return to_json(report.to_dict()) + "\n"


def _cmd_sweep(cfg: RunConfig, args) -> str:
    eta = _eta(cfg, args, required=args.var != "eta")
    grid = linear_grid(args.start, args.stop, args.steps)
    table = sweep(args.var, grid, cfg.model, cfg.efficiency, cfg.policy, eta, args.jobs)
    for x, err in zip(table.grid, table.errors):
        if err:
            _warn(f"{args.var}={x:g}: {err}")
    if any(r is not None and r.rate_overflow for r in table.rows):
        _warn("rate overflow (p or q above 1) at one or more grid points")
    buf = io.StringIO()
    write_csv(table, buf)
    return buf.getvalue()


def _cmd_threshold(cfg: RunConfig, args) -> str:
    res = find_threshold(cfg.efficiency, cfg.model)
    d = asdict(res)
    d["bracket"] = list(res.bracket)
    return to_json(d) + "\n"


def _cmd_simulate(cfg: RunConfig, args) -> str:
    eta = _eta(cfg, args)
    sc = SimConfig(
        workers=args.workers, periods=args.periods, burn_in=args.burn_in,
        replications=args.reps, seed=args.seed, params=cfg.model,
        curve=cfg.efficiency, policy=cfg.policy, eta=eta,
        initial_u=args.initial_u, record_path=bool(args.path_csv),
    )
    problems = sc.problems()
    if problems:
        raise ConfigValidationError(problems)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = simulate(sc, max_workers=args.jobs)
    if res.clamped_rate_events:
        _warn(f"job-finding rate clamped to 1 in {res.clamped_rate_events} periods")
    if args.path_csv:
        with open(args.path_csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("period", "u"))
            for t, u in enumerate(res.path):
                w.writerow((t + 1, format_cell(u)))
    if args.csv:
        cols = ("u_mean", "u_ci_halfwidth", "u_std_error", "clamped_rate_events", "theta", "finding_rate")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerow([format_cell(getattr(res, c)) for c in cols])
        return buf.getvalue()
    d = res.to_dict()
    d.pop("path", None)
    return to_json(d) + "\n"


def _cmd_validate(cfg: RunConfig, args) -> str:
    eta = args.eta if args.eta is not None else cfg.eta
    problems = config_problems(cfg, eta)
    out = {"ok": not problems, "violations": problems, "rate_overflow": None}
    if not problems and eta is not None:
        A = efficiency(cfg.efficiency, eta)
        report = solve_equilibrium(cfg.model, cfg.efficiency, cfg.policy, eta)
        if report.theta_star > 0:
            rates = finding_and_filling_rates(report.theta_star, A, cfg.model.alpha)
            out["rate_overflow"] = rates.rate_overflow
            out["p_star"], out["q_star"] = rates.p, rates.q
            _overflow_warning(report)
        else:
            out["rate_overflow"] = False
    for msg in problems:
        _warn(msg)
    args._exit = EXIT_OK if not problems else EXIT_INVALID
    return to_json(out) + "\n"


COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
}


def _emit(payload: str, target: str | None) -> None:
    if target:
        with open(target, "w", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
        sys.stdout.flush()


def run_cli(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        if args.command == "validate":
            try:
                cfg = parse_config(args.config)
            except ConfigValidationError as exc:
                _emit(to_json({"ok": False, "violations": exc.problems, "rate_overflow": None}) + "\n", args.output)
                for msg in exc.problems:
                    _warn(msg)
                return EXIT_INVALID
        else:
            cfg = parse_config(args.config)
        payload = COMMANDS[args.command](cfg, args)
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigValidationError as exc:
        for msg in exc.problems:
            print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_WRITE

    try:
        _emit(payload, args.output)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_WRITE
    return getattr(args, "_exit", EXIT_OK)


def main() -> None:
    sys.exit(run_cli())

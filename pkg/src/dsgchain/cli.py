"""Command-line interface: ``dsgchain {simulate,sweep,surface,damping,check}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import _backend, csvio
from .checks import run_checks
from .config import build_config, load_config
from .energy import energy_record
from .errors import NumericalError, ParseError, ValidationError
from .experiments import amplitude_sweep, bifurcation_surface, damping_study
from .integrator import run_simulation

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for numerical failures
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="dsgchain", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, help="YAML run configuration")
        p.add_argument("--output-dir", type=Path, help="override output_dir")
        p.add_argument("--workers", type=int, help="override workers")
        p.add_argument("--plot-script", action="store_true", help="also emit a matplotlib script")
        return p

    sim = add("simulate", "single run: trajectory and energy CSVs")
    sim.add_argument("--wide", action="store_true", help="include every local energy column")
    add("sweep", "amplitude sweep at one frequency and damping")
    add("surface", "frequency x amplitude grid and threshold curve")
    add("damping", "amplitude sweeps for several damping values")
    sub.add_parser("check", help="run the built-in invariant suite")
    return parser


def _config(args):
    cfg = load_config(args.config) if args.config else build_config()
    if args.output_dir is not None:
        cfg = replace(cfg, output_dir=args.output_dir)
    if args.workers is not None:
        if args.workers < 1:
            raise ValidationError("workers", "must be at least 1")
        cfg = replace(cfg, workers=args.workers)
    return cfg


def cmd_simulate(args):
    cfg = _config(args)
    traj = run_simulation(cfg.params, cfg.driving, cfg.grid,
                          newton_tol=cfg.newton_tol, max_newton_iters=cfg.max_newton_iters)
    record = energy_record(traj)
    out = cfg.output_dir
    csvio.write_trajectory_csv(traj, out / "trajectory.csv")
    csvio.write_energy_csv(record, out / "energy.csv", wide=args.wide or cfg.energy_mode == "wide")
    if args.plot_script:
        csvio.write_plot_script(out / "energy.csv", "t", "E")
        csvio.write_plot_script(out / "trajectory.csv", "t", f"u_{cfg.probe_node}")
    peak = float(np.max(np.abs(traj.states[:, cfg.probe_node])))
    print(f"E_T = {record.integrated:.10g}")
    print(f"max |u_{cfg.probe_node}| = {peak:.10g}")
    print(f"max Newton iterations = {int(traj.newton_iteration_counts.max())}")
    print(f"wrote {out / 'trajectory.csv'} and {out / 'energy.csv'}")
    return EXIT_OK


def _study(args, name, study, csv_name):
    cfg = _config(args)
    result = study(cfg.sweep_spec(name), workers=cfg.workers)
    out = cfg.output_dir
    csvio.write_sweep_csv(result, out / csv_name)
    csvio.write_thresholds_csv(result, out / "thresholds.csv")
    if args.plot_script:
        csvio.write_plot_script(out / csv_name, "amplitude", "E_T")
    failed = sum(not p.converged for p in result.points)
    for t in result.thresholds:
        a_s = "none" if t.amplitude is None else f"{t.amplitude:.6g}"
        print(f"omega={t.omega:g} gamma={t.gamma:g} threshold={a_s}")
    print(f"{len(result.points)} points ({failed} failed); wrote {out / csv_name}")
    return EXIT_OK


def cmd_check(args):
    results = run_checks()
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    print(f"kernel backend: {_backend.DEFAULT}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": lambda a: _study(a, "sweep", amplitude_sweep, "sweep.csv"),
    "surface": lambda a: _study(a, "surface", bifurcation_surface, "surface.csv"),
    "damping": lambda a: _study(a, "damping", damping_study, "damping.csv"),
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    if args.command is None:
        print(parser.format_help(), end="", file=sys.stderr)
        return EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, ParseError) as exc:
        print(f"dsgchain: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"dsgchain: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"dsgchain: I/O error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

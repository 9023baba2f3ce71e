"""Command-line driver: ``relayswitch {analytic,simulate,compare,sweep,figures}``.

Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import figures, report
from .config import LoadedConfig, dump_config, load_config
from .errors import ConfigurationError, RelaySwitchError
from .montecarlo import SWEEP_AXES, analytic_only, compare_worst_case, run_experiment, sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def parse_seed(text: str) -> int:
    """``u64`` literal, or ``auto`` to draw one from OS entropy."""
    if text == "auto":
        return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer or 'auto', got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed out of u64 range: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=parse_seed, help="base seed (u64) or 'auto'")
    common.add_argument("--out", help="output directory (default: stdout for tables)")
    common.add_argument("--replications", type=_positive_int)
    common.add_argument("--workers", type=_positive_int, help="worker processes for replications")

    with_config = argparse.ArgumentParser(add_help=False, parents=[common])
    with_config.add_argument("--config", required=True, help="JSON experiment file")
    with_config.add_argument("--dump-config", action="store_true", help="print the resolved config as JSON and exit")

    parser = _Parser(prog="relayswitch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analytic", parents=[with_config], help="closed-form values for the configured scheme")
    sub.add_parser("simulate", parents=[with_config], help="Monte-Carlo estimates next to the closed forms")
    sub.add_parser("compare", parents=[with_config], help="DSSC-B at its worst-case threshold against OR")
    sw = sub.add_parser("sweep", parents=[with_config], help="one experiment per value of a parameter")
    sw.add_argument("--axis", choices=SWEEP_AXES, help="overrides the config's sweep axis")
    sw.add_argument("--values", type=float, nargs="+", help="overrides the config's sweep values")
    sw.add_argument("--analytic-only", action="store_true", help="skip simulation")
    fg = sub.add_parser("figures", parents=[common], help="CSV data for the published figures")
    fg.add_argument("--figure", type=int, choices=figures.FIGURES, action="append", help="repeatable; default all")
    fg.add_argument("--simulate", action="store_true", help="add Monte-Carlo overlays")
    fg.add_argument("--duration", type=float, default=10.0, help="seconds per replication for overlays")
    return parser


def _resolve(args) -> LoadedConfig:
    loaded = load_config(args.config)
    exp = loaded.experiment
    if args.seed is not None:
        exp = replace(exp, base_seed=args.seed)
    if args.replications is not None:
        exp = replace(exp, replications=args.replications)
    return replace(loaded, experiment=exp)


def _emit(text: str, out_dir, filename: str, stdout) -> None:
    if out_dir is None:
        stdout.write(text)
    else:
        path = Path(out_dir) / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
        stdout.write(f"wrote {path}\n")


def _out_dir(args, loaded: LoadedConfig | None):
    if args.out is not None:
        return args.out
    return loaded.output_dir if loaded is not None else None


def cmd_analytic(args, stdout) -> int:
    loaded = _resolve(args)
    rows = report.rows_from_result(analytic_only(loaded.experiment), simulated=False)
    _emit(report.render(rows), _out_dir(args, loaded), "analytic.csv", stdout)
    return EXIT_OK


def cmd_simulate(args, stdout) -> int:
    loaded = _resolve(args)
    rows = report.rows_from_result(run_experiment(loaded.experiment, args.workers))
    _emit(report.render(rows), _out_dir(args, loaded), "simulate.csv", stdout)
    return EXIT_OK


def cmd_compare(args, stdout) -> int:
    loaded = _resolve(args)
    exp = loaded.experiment
    cmp = compare_worst_case(exp.topology, exp.trace, exp.replications, exp.base_seed, workers=args.workers)
    t = cmp.threshold.t
    rows = report.rows_from_result(cmp.or_, "threshold", t) + report.rows_from_result(cmp.dssc, "threshold", t)
    comments = [
        f"worst-case DSSC-B threshold T* = {t:.17e}",
        f"analytic SR_DSSC(T*) < SR_OR: {cmp.analytic_ordering_holds}",
        f"simulated SR_DSSC(T*) < SR_OR: {cmp.simulated_ordering_holds}",
    ]
    _emit(report.render(rows, comments), _out_dir(args, loaded), "compare.csv", stdout)
    if not cmp.analytic_ordering_holds:
        print("error: analytic DSSC-B rate at T* is not below the OR rate", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_sweep(args, stdout) -> int:
    loaded = _resolve(args)
    axis = args.axis or loaded.sweep_axis
    values = args.values or loaded.sweep_values
    if axis is None or not values:
        raise ConfigurationError("sweep needs an axis and values (config 'sweep' block or --axis/--values)")
    table = sweep(loaded.experiment, axis, values, simulate=not args.analytic_only, workers=args.workers)
    rows = []
    for row in table:
        rows += report.rows_from_result(row.result, row.param_name, row.param_value, simulated=not args.analytic_only)
    _emit(report.render(rows), _out_dir(args, loaded), f"sweep_{axis}.csv", stdout)
    return EXIT_OK


def cmd_figures(args, stdout) -> int:
    out = Path(args.out or "figures")
    sim = None
    if args.simulate:
        sim = figures.SimSettings(
            replications=args.replications or figures.SimSettings.replications,
            duration_s=args.duration,
            base_seed=args.seed or 0,
            workers=args.workers,
        )
    for fig in args.figure or figures.FIGURES:
        for path in figures.write_figure(fig, out, sim):
            stdout.write(f"wrote {path}\n")
    return EXIT_OK


COMMANDS = {
    "analytic": cmd_analytic,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "figures": cmd_figures,
}


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"relayswitch: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if getattr(args, "dump_config", False):
            stdout.write(json.dumps(dump_config(_resolve(args)), indent=2) + "\n")
            return EXIT_OK
        return COMMANDS[args.command](args, stdout)
    except ConfigurationError as exc:
        print(f"relayswitch: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RelaySwitchError, ValueError, ArithmeticError, OSError) as exc:
        print(f"relayswitch: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

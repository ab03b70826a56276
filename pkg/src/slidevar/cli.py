"""Command-line interface.

Subcommands
-----------
compute
    Price a loss series (from a ``date,price`` CSV) with every measure once,
    over the full sample.
simulate
    Sample Gaussian-mixture stress sweeps and price each grid point; writes
    the sweep table, per-point histograms and a figure per sweep.
backtest
    Rolling historical simulation over a price CSV or a configured synthetic
    regime series; writes window records, per-measure summaries and a figure.
check
    Run the randomized property suite and report any counterexample.

Exit codes: 0 success, 1 property-suite failure, 2 usage error, 3 file parse
error, 4 numerical/domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .backtest import MEASURES, BacktestReport, regime_series, rolling_backtest, run_sweep
from .checks import run_all
from .config import RunConfig, TABLE_FORMATS, default_config, load_config
from .dataio import Table, ingest, write_table
from .empirical import EmpiricalDistribution
from .errors import ParseError, SlideVaRError
from .measures import cvar, gluevar
from .slide import evaluate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4


class UsageError(Exception):
    """A command invocation that cannot be run as given."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slidevar",
        description="Market-adaptive tail risk measurement.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    specs = (
        ("compute", "price a loss series once with every measure"),
        ("simulate", "sample stress sweeps from the Gaussian mixture"),
        ("backtest", "rolling historical simulation with violation counts"),
        ("check", "run the randomized property suite"),
    )
    for name, help_text in specs:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--config", type=Path, metavar="FILE", help="YAML run configuration")
        sub.add_argument("--data", type=Path, metavar="FILE", help="date,price CSV input")
        sub.add_argument("--out", type=Path, metavar="DIR", help="output directory")
        sub.add_argument("--seed", type=int, metavar="N", help="override the run seed")
        sub.add_argument(
            "--format",
            choices=TABLE_FORMATS,
            help="table format (default from config: csv)",
        )
        sub.add_argument(
            "--no-figures",
            action="store_true",
            help="skip PNG rendering, write tables only",
        )
    return parser


def _load_run_config(args: argparse.Namespace) -> RunConfig:
    if args.config is None:
        return default_config()
    if not args.config.exists():
        raise UsageError(f"config file not found: {args.config}")
    return load_config(args.config)


def _resolve_seed(args: argparse.Namespace, config: RunConfig) -> int | None:
    return args.seed if args.seed is not None else config.seed


def _require_seed(args: argparse.Namespace, config: RunConfig, command: str) -> int:
    seed = _resolve_seed(args, config)
    if seed is None:
        raise UsageError(f"{command} needs a seed: pass --seed or set 'seed' in the config")
    return seed


def _out_dir(args: argparse.Namespace, config: RunConfig) -> Path:
    return args.out if args.out is not None else Path(config.output.directory)


def _fmt(args: argparse.Namespace, config: RunConfig) -> str:
    return args.format if args.format is not None else config.output.format


def _load_losses(args: argparse.Namespace, command: str) -> tuple[tuple[str, ...], np.ndarray]:
    if args.data is None:
        raise UsageError(f"{command} needs --data with a {','.join(('date', 'price'))} CSV")
    if not args.data.exists():
        raise UsageError(f"data file not found: {args.data}")
    return ingest(args.data)


def _slug(value: float) -> str:
    text = f"{value:g}".replace("-", "m").replace(".", "p")
    return text


def cmd_compute(args: argparse.Namespace, config: RunConfig) -> int:
    dates, losses = _load_losses(args, "compute")
    slide_config = config.slide_config()
    weights = config.gluevar()
    d = EmpiricalDistribution(losses)
    breakdown = evaluate(d, slide_config)
    rows = (
        ("var_beta", breakdown.var_beta),
        ("cvar_beta", cvar(d, slide_config.beta)),
        ("cvar_alpha", breakdown.cvar_alpha),
        ("gluevar", gluevar(d, slide_config.beta, slide_config.alpha, weights)),
        ("slidevar", breakdown.value),
        ("tail_thickness", breakdown.tail_thickness),
        ("weight", breakdown.weight),
    )
    table = Table(name="measures", columns=("measure", "value"), rows=rows)
    span = f"{dates[0]} .. {dates[-1]}" if dates else "-"
    print(f"{len(losses)} losses ({span})")
    for name, value in rows:
        print(f"{name:<16}{value:.10g}")
    if args.out is not None:
        path = write_table(table, _out_dir(args, config), _fmt(args, config))
        print(f"wrote {path}")
    return EXIT_OK


def _sweep_table(rows) -> Table:
    columns = (
        "parameter",
        "value",
        "var_beta",
        "cvar_alpha",
        "gluevar",
        "slidevar",
        "tail_thickness",
        "weight",
    )
    data = tuple(
        (
            r.parameter,
            r.value,
            r.var_beta,
            r.cvar_alpha,
            r.gluevar,
            r.slidevar,
            r.tail_thickness,
            r.weight,
        )
        for r in rows
    )
    return Table(name="sweep", columns=columns, rows=data)


def _histogram_table(name: str, d: EmpiricalDistribution, bins: int = 80) -> Table:
    counts, edges = np.histogram(d.scenarios, bins=bins)
    density = counts / (d.n * np.diff(edges))
    rows = tuple(
        (float(edges[i]), float(edges[i + 1]), int(counts[i]), float(density[i]))
        for i in range(len(counts))
    )
    return Table(name=name, columns=("bin_left", "bin_right", "count", "density"), rows=rows)


def cmd_simulate(args: argparse.Namespace, config: RunConfig) -> int:
    seed = _require_seed(args, config, "simulate")
    slide_config = config.slide_config()
    weights = config.gluevar()
    out = _out_dir(args, config)
    fmt = _fmt(args, config)
    specs = config.sweep_specs(seed)
    if not specs:
        raise UsageError("the sweep section disables both axes; nothing to simulate")
    all_rows = []
    for spec in specs:
        rows = run_sweep(spec, slide_config, weights)
        all_rows.extend(rows)
        for row in rows:
            hist = _histogram_table(f"hist_{spec.parameter}_{_slug(row.value)}", row.distribution)
            write_table(hist, out, fmt)
        if not args.no_figures:
            from .plots import save_sweep_figure

            save_sweep_figure(rows, slide_config, out / f"sweep_{spec.parameter}.png")
    path = write_table(_sweep_table(all_rows), out, fmt)
    print(f"priced {len(all_rows)} grid points over {len(specs)} sweep(s)")
    for row in all_rows:
        print(
            f"{row.parameter}={row.value:<8g} slidevar={row.slidevar:<12.6g} "
            f"weight={row.weight:.4f}"
        )
    print(f"wrote {path}")
    return EXIT_OK


def _window_table(report: BacktestReport) -> Table:
    columns = (
        "index",
        "label",
        "regime",
        "var_beta",
        "cvar_alpha",
        "gluevar",
        "slidevar",
        "tail_thickness",
        "weight",
        "realized",
        "viol_var_beta",
        "viol_cvar_alpha",
        "viol_gluevar",
        "viol_slidevar",
    )
    data = tuple(
        (
            r.index,
            r.label,
            r.regime,
            r.var_beta,
            r.cvar_alpha,
            r.gluevar,
            r.slidevar,
            r.tail_thickness,
            r.weight,
            r.realized,
            *(r.violated(m) for m in MEASURES),
        )
        for r in report.records
    )
    return Table(name="windows", columns=columns, rows=data)


def _summary_table(report: BacktestReport) -> Table:
    columns = ("measure", "windows", "violations", "violation_rate", "mean_charge", "mean_excess")
    data = tuple(
        (s.measure, s.windows, s.violations, s.violation_rate, s.mean_charge, s.mean_excess)
        for s in report.summaries
    )
    return Table(name="summary", columns=columns, rows=data)


def cmd_backtest(args: argparse.Namespace, config: RunConfig) -> int:
    slide_config = config.slide_config()
    weights = config.gluevar()
    out = _out_dir(args, config)
    fmt = _fmt(args, config)
    if args.data is not None:
        dates, losses = _load_losses(args, "backtest")
        labels: tuple[str, ...] | None = dates
        regimes = None
    elif config.regime is not None:
        seed = _require_seed(args, config, "backtest (synthetic)")
        losses, regime_idx = regime_series(config.regime_spec(), config.regime.length, seed)
        labels = None
        regimes = tuple(int(r) for r in regime_idx)
    else:
        raise UsageError("backtest needs --data or a 'regime' section in the config")
    report = rolling_backtest(
        losses, config.window, slide_config, weights, labels=labels, regimes=regimes
    )
    write_table(_window_table(report), out, fmt)
    path = write_table(_summary_table(report), out, fmt)
    if not args.no_figures:
        from .plots import save_backtest_figure

        save_backtest_figure(report, slide_config, out / "backtest.png")
    print(f"{len(report.records)} windows of width {config.window.width}")
    for s in report.summaries:
        print(
            f"{s.measure:<12}violations={s.violations:<6}rate={s.violation_rate:<10.4g}"
            f"mean_charge={s.mean_charge:.6g}"
        )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace, config: RunConfig) -> int:
    seed = args.seed if args.seed is not None else (
        config.check.seed if config.check.seed is not None else (config.seed or 0)
    )
    outcomes = run_all(cases=config.check.cases, seed=seed)
    rows = tuple(
        (
            o.name,
            o.description,
            o.cases,
            o.failures,
            o.passed,
            "" if o.counterexample is None else json.dumps(o.counterexample, sort_keys=True),
        )
        for o in outcomes
    )
    table = Table(
        name="properties",
        columns=("property", "description", "cases", "failures", "passed", "counterexample"),
        rows=rows,
    )
    for o in outcomes:
        state = "pass" if o.passed else f"FAIL ({o.failures}/{o.cases})"
        print(f"{o.name:<5}{state:<18}{o.description}")
    if args.out is not None:
        path = write_table(table, _out_dir(args, config), _fmt(args, config))
        print(f"wrote {path}")
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_CHECK_FAILED


_COMMANDS = {
    "compute": cmd_compute,
    "simulate": cmd_simulate,
    "backtest": cmd_backtest,
    "check": cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        config = _load_run_config(args)
        return _COMMANDS[args.command](args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SlideVaRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

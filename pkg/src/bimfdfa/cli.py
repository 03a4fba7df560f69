"""Command-line interface.

    bimfdfa analyze prices.csv --column close --method both --out-dir out/
    bimfdfa export out/report.json --which hurst --out-dir plots/
    bimfdfa synth binomial_cascade --length 8192 --p 0.75 -o cascade.csv

Exit codes: 0 success, 2 bad configuration or usage, 3 unreadable or invalid
input data, 4 numerical failure during the analysis.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BadOverlapError,
    MultifractalError,
    NonFiniteValueError,
    NonPositivePriceError,
    ParseError,
    ScaleTooLargeError,
    ScaleTooSmallError,
    TooShortError,
    UnknownViewError,
)
from .pipeline import VIEWS, AnalysisConfig, ConfigError, export_plot_data, ingest, run, summary, write_outputs
from .scaling import DEFAULT_Q_GRID
from .synth import GeneratorSpec, generate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_CONFIG_ERRORS = (ConfigError, ScaleTooLargeError, ScaleTooSmallError, BadOverlapError, UnknownViewError)
_DATA_ERRORS = (ParseError, NonPositivePriceError, NonFiniteValueError, TooShortError)


def _q_grid(text: str) -> tuple:
    if text == "default":
        return DEFAULT_Q_GRID
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            return tuple(float(v) for v in np.round(np.arange(lo, hi + step / 2, step), 12))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad q grid {text!r}; use 'default', a comma list or lo:hi:step") from None


def _triple(text: str) -> tuple:
    try:
        lo, hi, count = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max:count, got {text!r}") from None
    return lo, hi, count


def _pair(text: str) -> tuple:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max, got {text!r}") from None
    return lo, hi


def _modes(text: str) -> tuple:
    if text in ("", "none"):
        return ()
    return tuple(m.strip() for m in text.split(",") if m.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bimfdfa", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run MF-DFA / Bi-OSW-MF-DFA on a CSV column")
    a.add_argument("input", type=Path)
    a.add_argument("--method", choices=("mfdfa", "biosw", "both"), default="both")
    a.add_argument("--order", type=int, default=1, help="detrending polynomial degree (default 1)")
    a.add_argument("--q-grid", type=_q_grid, default=DEFAULT_Q_GRID,
                   help="'default', comma list, or lo:hi:step; write --q-grid=-20,... for negative values")
    a.add_argument("--scales", type=_triple, default=None, metavar="MIN:MAX:COUNT",
                   help="log-spaced integer scales (default 10 .. min(N/4, 500), 15 points)")
    a.add_argument("--overlap-frac", type=float, default=0.25, help="Bi-OSW overlap l/s, in (0, 0.5)")
    a.add_argument("--surrogates", type=_modes, default=("shuffle", "phase_single_angle"),
                   help="comma list of shuffle, phase_single_angle, phase_random, or 'none'")
    a.add_argument("--replicates", type=int, default=10, help="surrogate replicates per mode")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--shuffle", choices=("transpositions", "fisher-yates"), default="transpositions",
                   help="shuffling algorithm: 20N random transpositions, or one Fisher-Yates pass")
    a.add_argument("--column", default="-1", help="column name or 0-based index (default: last)")
    a.add_argument("--kind", choices=("price", "return", "generic"), default="price",
                   help="'price' converts to log returns before analysis")
    a.add_argument("--delimiter", default=",")
    a.add_argument("--fit-range", type=_pair, action="append", default=[], metavar="MIN:MAX",
                   help="scale range for the h(q) fit; repeat for crossover regimes (first is primary)")
    a.add_argument("--out-dir", type=Path, default=Path("mfdfa-out"))
    a.add_argument("--export", default="all", help=f"plot views to write: 'all', 'none' or subset of {','.join(VIEWS)}")
    a.add_argument("--quiet", action="store_true", help="do not print the summary tables")

    e = sub.add_parser("export", help="write plot-data CSVs from an existing report.json")
    e.add_argument("report", type=Path)
    e.add_argument("--which", default="all")
    e.add_argument("--out-dir", type=Path, default=Path("."))

    s = sub.add_parser("synth", help="write a synthetic test series as CSV")
    s.add_argument("kind", choices=("gaussian_iid", "student_t", "binomial_cascade", "random_walk"))
    s.add_argument("--length", type=int, default=8192)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--p", type=float, default=0.75, help="cascade weight")
    s.add_argument("--df", type=float, default=3.0, help="Student-t degrees of freedom")
    s.add_argument("--as-prices", action="store_true", help="emit 100 * exp(cumsum(vol * x)) price levels")
    s.add_argument("--vol", type=float, default=0.01, help="return scale used with --as-prices")
    s.add_argument("-o", "--output", type=Path, required=True)
    return parser


def _views(text: str):
    if text == "none":
        return ()
    if text == "all":
        return VIEWS
    return tuple(v.strip() for v in text.split(","))


def _cmd_analyze(args) -> int:
    column = int(args.column) if args.column.lstrip("-").isdigit() else args.column
    config = AnalysisConfig(
        method=args.method,
        order=args.order,
        q_grid=args.q_grid,
        scales=args.scales,
        overlap_frac=args.overlap_frac,
        surrogates=args.surrogates,
        replicates=args.replicates,
        seed=args.seed,
        fisher_yates=args.shuffle == "fisher-yates",
        column=column,
        kind=args.kind,
        delimiter=args.delimiter,
        fit_ranges=tuple(args.fit_range),
    )
    views = _views(args.export)
    for v in views:
        if v not in VIEWS:
            raise UnknownViewError(f"unknown view {v!r}; choose from {', '.join(VIEWS)}")
    series, info = ingest(args.input, config)
    report, timings = run(series, config, info)
    paths = write_outputs(report, timings, args.out_dir, views)
    if not args.quiet:
        print(summary(report))
        print(f"report: {paths['report']}")
    return EXIT_OK


def _cmd_export(args) -> int:
    report = json.loads(args.report.read_text(encoding="utf-8"))
    for p in export_plot_data(report, _views(args.which), args.out_dir):
        print(p)
    return EXIT_OK


def _cmd_synth(args) -> int:
    params = {"p": args.p} if args.kind == "binomial_cascade" else {"df": args.df} if args.kind == "student_t" else {}
    series = generate(GeneratorSpec(args.kind, args.length, params, args.seed))
    values = series.values
    if args.as_prices:
        values = 100.0 * np.exp(np.concatenate([[0.0], np.cumsum(args.vol * values)]))
    args.output.parent.mkdir(parents=True, exist_ok=True)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write("t,value\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{float(v)!r}\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"analyze": _cmd_analyze, "export": _cmd_export, "synth": _cmd_synth}[args.command]
    try:
        return handler(args)
    except _CONFIG_ERRORS as exc:
        print(f"bimfdfa: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"bimfdfa: input not found: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except _DATA_ERRORS as exc:
        print(f"bimfdfa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MultifractalError as exc:
        print(f"bimfdfa: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

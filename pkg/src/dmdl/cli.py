"""Command-line entry point: ``dmdl synth|detect|bench``.

Exit codes are 0 on success, 1 on usage errors and 2 on data errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .detectors import DetectorConfig
from .pipeline import (
    DataError,
    calibrate_deltas,
    bench,
    detect,
    dump_json,
    file_digest,
    ingest_csv,
    ingest_ecdc,
    write_svg,
    write_trace_csv,
)
from .stats import ThresholdConfig
from .synth import SynthConfig, generate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

MODEL_NAMES = {"gaussian": "gaussian_direct", "exponential": "exponential_residual"}

DETECT_DEFAULTS = {
    "model": "gaussian",
    "mode": "hierarchical",
    "order": 0,
    "h": 100,
    "delta": 0.05,
    "delta1": 0.05,
    "delta2": 0.05,
    "beta": 0.0,
    "max_window": None,
    "sign_cut": "per_order",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def default_seed() -> int:
    raw = os.environ.get("DMDL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"DMDL_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dmdl", description="Differential MDL change detection")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="generate a synthetic stream")
    s.add_argument("--kind", choices=("mean", "variance"), required=True)
    s.add_argument("--transition", choices=("abrupt", "gradual"), required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--length", type=int, default=10000)
    s.add_argument("--out", required=True)

    d = sub.add_parser("detect", help="run a detector over a CSV or ECDC export")
    d.add_argument("--input", required=True)
    d.add_argument("--config", help="JSON file with detect options; flags override it")
    d.add_argument("--column", default=None, help="value column for generic CSV (default x or value)")
    d.add_argument("--date-column", default=None)
    d.add_argument("--ecdc-country", default=None, help="read the input as an ECDC export")
    # None marks "not given on the command line" so config-file values survive
    d.add_argument("--model", choices=tuple(MODEL_NAMES), default=None)
    d.add_argument("--mode", choices=("fixed", "adaptive", "hierarchical"), default=None)
    d.add_argument("--order", type=int, choices=(0, 1, 2), default=None)
    d.add_argument("--h", type=int, default=None)
    d.add_argument("--delta", type=float, default=None)
    d.add_argument("--delta1", type=float, default=None)
    d.add_argument("--delta2", type=float, default=None)
    d.add_argument("--beta", type=float, default=None)
    d.add_argument("--max-window", dest="max_window", type=int, default=None)
    d.add_argument("--sign-cut", dest="sign_cut", choices=("per_order", "zeroth"), default=None)
    cal = d.add_mutually_exclusive_group()
    cal.add_argument("--calibrate-at", type=int, default=None, help="row index of an initial warning")
    cal.add_argument("--calibrate-date", default=None, help="ISO date of an initial warning")
    d.add_argument("--out", required=True, help="RunReport JSON path")
    d.add_argument("--trace", default=None, help="score trace CSV path")
    d.add_argument("--svg", default=None, help="score plot SVG path")

    b = sub.add_parser("bench", help="fixed-window AUC table over seeded synthetic streams")
    b.add_argument("--seeds", type=int, default=5, help="number of seeds")
    b.add_argument("--base-seed", type=int, default=None)
    b.add_argument("--kind", choices=("mean", "variance"), required=True)
    b.add_argument("--transition", choices=("abrupt", "gradual"), required=True)
    b.add_argument("--T", type=int, default=100)
    b.add_argument("--h", type=int, default=100)
    b.add_argument("--length", type=int, default=10000)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", default=None)
    return p


def cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    cfg = SynthConfig(kind=args.kind, transition=args.transition, seed=seed, length=args.length)
    series = generate(cfg)
    extra = "true_mu" if cfg.kind == "mean" else "true_sigma"
    truth = series.meta[extra]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", extra])
        w.writerows([i, format(v, ".17g"), format(m, ".17g")] for i, (v, m) in enumerate(zip(series.values, truth)))
    return EXIT_OK


def effective_detect_options(args) -> dict:
    opts = dict(DETECT_DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(loaded) - set(DETECT_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(loaded)
    for key in DETECT_DEFAULTS:
        value = getattr(args, key)
        if value is not None:
            opts[key] = value
    if opts["model"] not in MODEL_NAMES:
        raise UsageError(f"unknown model {opts['model']!r}")
    return opts


def _read_input(args):
    if args.ecdc_country:
        return ingest_ecdc(args.input, args.ecdc_country)
    column = args.column
    if column is None:
        with open(args.input, newline="") as fh:
            header = next(csv.reader(fh), [])
        column = next((c for c in ("x", "value", "cases") if c in header), None)
        if column is None:
            raise DataError(f"{args.input}: no value column; pass --column")
    return ingest_csv(args.input, column, args.date_column)


def cmd_detect(args) -> int:
    opts = effective_detect_options(args)
    try:
        thresholds = ThresholdConfig(delta=opts["delta"], delta1=opts["delta1"], delta2=opts["delta2"])
        cfg = DetectorConfig(
            mode=opts["mode"],
            h=opts["h"],
            thresholds=thresholds,
            model=MODEL_NAMES[opts["model"]],
            beta=opts["beta"],
            max_window=opts["max_window"],
            sign_cut=opts["sign_cut"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        series = _read_input(args)
    except OSError as exc:
        raise DataError(str(exc)) from None
    provenance = {"input": str(args.input), "sha256": file_digest(args.input)}
    warning_index = args.calibrate_at
    if args.calibrate_date is not None:
        if series.labels is None or args.calibrate_date not in series.labels:
            raise DataError(f"warning date {args.calibrate_date} not in input")
        warning_index = series.labels.index(args.calibrate_date)
    try:
        if warning_index is not None:
            delta1, delta2 = calibrate_deltas(series, warning_index, cfg)
            cfg = replace(cfg, thresholds=replace(thresholds, delta1=delta1, delta2=delta2))
            provenance["calibrated_at"] = warning_index
        report = detect(series, cfg, order=opts["order"], provenance=provenance)
    except DataError:
        raise
    except ValueError as exc:
        raise DataError(str(exc)) from None
    dump_json(report.to_dict(), args.out)
    if args.trace:
        # record times index the input rows for both models, so x is the raw input value
        write_trace_csv(series, report.records, args.trace)
    if args.svg:
        write_svg(report.records, args.svg)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    base = args.base_seed if args.base_seed is not None else default_seed()
    result = bench(
        list(range(base, base + args.seeds)),
        args.kind,
        args.transition,
        T=args.T,
        h=args.h,
        length=args.length,
        workers=args.workers,
    )
    text = dump_json(result, args.out)
    if args.out is None:
        print(text)
    return EXIT_OK


COMMANDS = {"synth": cmd_synth, "detect": cmd_detect, "bench": cmd_bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

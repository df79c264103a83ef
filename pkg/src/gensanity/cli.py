"""Command line entry point.

Subcommands:
  run              run the sanity-check suite and export tables + curves
  catalog          print the check catalog as JSON
  validate-ranges  print Hellinger-derived total-variation bounds for the
                   Gaussian mean/std sweeps (sanity data for sweep ranges)
  eval             compute the 12 metrics on two user-supplied CSV datasets
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .checks import build_catalog, catalog_json
from .data import load_dataset
from .embed import embed_pair
from .harness import SuiteConfig, export_suite, run_suite
from .metrics import METRIC_IDS, MetricConfig, compute_all
from .samplers import (
    gaussian_mean_hellinger_sq,
    gaussian_std_hellinger_sq,
    tv_bounds_from_hellinger_sq,
)

_MEAN_RANGES = {1: 6.0, 8: 3.0, 64: 1.0}
_STD_EXPONENTS = {1: 3.0, 8: 1.0, 64: 0.5}


def _id_list(text: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated id list")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gensanity",
        description="Sanity-check benchmark for generative fidelity/diversity metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the suite and export results")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--repeats", type=int, default=10)
    run_p.add_argument("--checks", type=_id_list, default=None, metavar="id,...")
    run_p.add_argument("--metrics", type=_id_list, default=None, metavar="id,...")
    run_p.add_argument("--embedding", choices=("simple", "one-class"), default="simple")
    run_p.add_argument("--workers", type=int, default=1)
    run_p.add_argument("--out", default="gensanity-out", metavar="DIR")
    run_p.add_argument("--fast", action="store_true",
                       help="halve grid resolution and repeats")
    run_p.add_argument("--base-size", type=int, default=1000,
                       help="default points per side in non-sweep checks")
    run_p.add_argument("--grid", type=int, default=13,
                       help="sweep grid resolution (odd, >= 3)")
    run_p.add_argument("--sweep-min", type=int, default=100)
    run_p.add_argument("--sweep-max", type=int, default=10000)

    cat_p = sub.add_parser("catalog", help="print the check catalog as JSON")
    cat_p.add_argument("--base-size", type=int, default=1000)
    cat_p.add_argument("--grid", type=int, default=13)
    cat_p.add_argument("--sweep-min", type=int, default=100)
    cat_p.add_argument("--sweep-max", type=int, default=10000)

    sub.add_parser(
        "validate-ranges",
        help="print total-variation bounds over the Gaussian sweep grids",
    )

    eval_p = sub.add_parser("eval", help="compute all metrics on two CSV datasets")
    eval_p.add_argument("--real", required=True, metavar="FILE")
    eval_p.add_argument("--synthetic", required=True, metavar="FILE")
    eval_p.add_argument("--schema", required=True, metavar="FILE",
                        help="JSON column schema shared by both CSVs")
    return parser


def _cmd_run(args) -> int:
    config = SuiteConfig(
        seed=args.seed,
        repeats=args.repeats,
        checks=args.checks,
        metrics=args.metrics if args.metrics is not None else METRIC_IDS,
        embedding=args.embedding,
        workers=args.workers,
        base_size=args.base_size,
        grid=args.grid,
        sweep_min=args.sweep_min,
        sweep_max=args.sweep_max,
        fast=args.fast,
    )
    results = run_suite(config)
    paths = export_suite(results, args.out)
    errored = sum(1 for v in results.verdicts if v.letter == "E")
    print(f"checks: {len(results.specs)}  curves: {len(results.curves)}  "
          f"verdict cells: {len(results.verdicts)}  errored: {errored}")
    print(f"fidelity table: {paths['table_fidelity'][0]}")
    print(f"diversity table: {paths['table_diversity'][0]}")
    print(f"results bundle: {paths['results']}")
    return 0


def _cmd_catalog(args) -> int:
    catalog = build_catalog(
        base_size=args.base_size,
        grid=args.grid,
        sweep_min=args.sweep_min,
        sweep_max=args.sweep_max,
    )
    print(catalog_json(catalog))
    return 0


def _cmd_validate_ranges(_args) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["check", "dim", "x", "hellinger_sq", "tv_lower", "tv_upper"])
    for dim, reach in _MEAN_RANGES.items():
        for x in np.linspace(-reach, reach, 13):
            h2 = gaussian_mean_hellinger_sq(float(x), dim)
            lo, hi = tv_bounds_from_hellinger_sq(h2)
            writer.writerow(
                ["gaussian_mean_difference", dim, repr(float(x)), repr(h2),
                 repr(lo), repr(hi)]
            )
    for dim, expo in _STD_EXPONENTS.items():
        for x in np.logspace(-expo, expo, 13):
            h2 = gaussian_std_hellinger_sq(float(x), dim)
            lo, hi = tv_bounds_from_hellinger_sq(h2)
            writer.writerow(
                ["gaussian_std_difference", dim, repr(float(x)), repr(h2),
                 repr(lo), repr(hi)]
            )
    return 0


def _cmd_eval(args) -> int:
    real = load_dataset(args.real, args.schema)
    synthetic = load_dataset(args.synthetic, args.schema)
    emb_real, emb_syn = embed_pair(real, synthetic)
    values = compute_all(emb_real, emb_syn, MetricConfig())
    print(json.dumps({m: values[m] for m in METRIC_IDS}, indent=1))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "catalog": _cmd_catalog,
        "validate-ranges": _cmd_validate_ranges,
        "eval": _cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except BrokenPipeError:
        # Downstream consumer (e.g. `head`) closed stdout; not an error.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: reproduce any experiment as a CSV/JSON artifact.

Usage:
    fas-edof <experiment> [--N ...] [--W ...] [--snr-db START:STEP:STOP] ...

dB values are converted to linear scale exactly once, inside the experiment
runners; the library API below the CLI is linear-only.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import NumericError
from .experiments import emit, experiment_names, run_experiment

_PARAM_FLAGS = {
    # flag, params key, help
    ("--N", "N", "port count (scalar, 'a,b,c' list, or start:step:stop sweep)"),
    ("--W", "W", "normalized aperture in wavelengths (scalar, list, or sweep)"),
    ("--Wx", "Wx", "planar aperture along x, wavelengths"),
    ("--Wy", "Wy", "planar aperture along y, wavelengths"),
    ("--snr-db", "snr_db", "average SNR in dB (scalar, list, or start:step:stop)"),
    ("--threshold-db", "threshold_db", "outage threshold in dB (scalar, list, or sweep)"),
    ("--trials", "trials", "Monte Carlo trials"),
    ("--seed", "seed", "64-bit master seed"),
    ("--users", "users", "FAMA user counts (scalar or list)"),
    ("--blocks", "blocks", "block-correlation block count D"),
    ("--block-size", "block_size", "block-correlation block size B"),
    ("--rho", "rho", "block-correlation intra-block correlation"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fas-edof",
        description=(
            "Closed-form fluid-antenna outage/capacity analysis with exact "
            "Monte Carlo baselines. Each experiment reproduces one study as a "
            "table; defaults match the study's stated parameters."
        ),
    )
    parser.add_argument(
        "experiment",
        choices=experiment_names(),
        help="which experiment to run",
    )
    for flag, dest, help_text in sorted(_PARAM_FLAGS):
        parser.add_argument(flag, dest=dest, default=None, help=help_text)
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )
    parser.add_argument(
        "--out", default=None, help="output path (default: standard output)"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    overrides = {
        key: getattr(args, key)
        for _flag, key, _help in _PARAM_FLAGS
        if getattr(args, key) is not None
    }
    try:
        table = run_experiment(args.experiment, overrides)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    try:
        emit(table, format=args.format, destination=args.out)
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())

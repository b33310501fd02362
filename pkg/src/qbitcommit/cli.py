"""Command-line harness: ``run``, ``report`` and ``demo`` subcommands.

Exit status: 0 on success, 1 for configuration errors, 2 when a run hits a
simulation cap (or cannot build a code with the requested parameters).
"""

from __future__ import annotations

import argparse
import sys

from . import attacks, harness
from .errors import CapExceededError, CodeSearchError
from .protocols import script

EXIT_OK, EXIT_CONFIG, EXIT_CAP = 0, 1, 2


def _cmd_run(args) -> int:
    cfg = harness.ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.format is not None:
        cfg.format = args.format
    cfg.validate()
    text = harness.format_rows(harness.run(cfg), cfg.format)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        rows = harness.read_table(args.results)
    except OSError as exc:
        raise harness.ConfigError("results", str(exc)) from exc
    try:
        sys.stdout.write(harness.report(rows))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _cmd_demo(args) -> int:
    s = script.bb84_commitment_script()
    print("Single-photon commitment: bit and basis written into one qubit, basis kept coherent.")
    print("Alice commits to 0, then rotates her bit and basis registers to open as 1.")
    rep = attacks.run_commitment_attack(s)
    print(rep.to_record())
    print(f"Bob's projective check accepts the fake opening with probability "
          f"{rep.acceptance_probability:.6f} = F^2.")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbitcommit",
                                     description="Bit-commitment attack experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out")
    p_run.add_argument("--format", choices=harness.FORMATS)
    p_run.set_defaults(func=_cmd_run)

    p_rep = sub.add_parser("report", help="summarize a results table")
    p_rep.add_argument("results")
    p_rep.set_defaults(func=_cmd_report)

    p_demo = sub.add_parser("demo", help="single-qubit attack walkthrough")
    p_demo.set_defaults(func=_cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapExceededError, CodeSearchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())

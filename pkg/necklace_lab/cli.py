# ------------------------------------------------------------------------------
# File: cli.py
#
# Purpose:
#     Single command-line entry point for the lab. Each subcommand builds an
#     OutputEnvelope and emits it on standard output; diagnostics go to the
#     logger on standard error.
#
# Subcommands:
#     dist       exact law table (or integer process counts with --counts)
#     moments    exact mean and variance, white and black beads
#     count      necklace counts vs the golden-ratio estimate
#     simulate   seeded Monte Carlo run, optional chi-square check
#     verify     acceptance suite, one report line per check
#     eval-gf    numeric value of the closed-form generating function
#
# Exit codes follow necklace_lab.errors: 0 ok, 2 usage, 3 domain,
# 4 consistency, 1 anything else.
# ------------------------------------------------------------------------------

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, TextIO

from necklace_lab.config import LAB_CONFIG, get_default_seed, get_log_level
from necklace_lab.counting import count_reports
from necklace_lab.errors import (
    EXIT_CONSISTENCY,
    EXIT_FAILURE,
    EXIT_OK,
    InputError,
    NecklaceLabError,
)
from necklace_lab.exactdist import (
    CLOSED_FORMS,
    closed_form_eval,
    dist_table,
    moments_black,
    moments_white,
    process_counts,
)
from necklace_lab.exports import (
    FORMATS,
    OutputEnvelope,
    count_report_frame,
    dist_table_frame,
    emit,
    frame_records,
    histogram_frame,
    moments_frame,
    process_count_frame,
)
from necklace_lab.montecarlo import METHODS, SimConfig, chi_square, run
from necklace_lab.verify import CHECKS, LEVELS, run_checks

logger = logging.getLogger("necklace_lab")


# ==============================================================================
# Subcommands
# ==============================================================================


def cmd_dist(args: argparse.Namespace, out: TextIO) -> int:
    if args.counts:
        frame = process_count_frame(process_counts(args.n_max))
    else:
        frame = dist_table_frame(dist_table(args.n_max))
    envelope = OutputEnvelope(
        command="dist",
        parameters={"n_max": args.n_max, "counts": args.counts},
        payload=frame_records(frame),
    )
    emit(envelope, args.format, out, frame)
    return EXIT_OK


def cmd_moments(args: argparse.Namespace, out: TextIO) -> int:
    table = dist_table(args.n_max)
    ns = range(2, args.n_max + 1)
    frame = moments_frame(
        [moments_white(n, table) for n in ns], [moments_black(n, table) for n in ns]
    )
    envelope = OutputEnvelope(
        command="moments",
        parameters={"n_max": args.n_max},
        payload=frame_records(frame),
    )
    emit(envelope, args.format, out, frame)
    return EXIT_OK


def cmd_count(args: argparse.Namespace, out: TextIO) -> int:
    limit = LAB_CONFIG["bruteforce_max_k"]
    if not 0 <= args.with_bruteforce_up_to <= limit:
        raise InputError(
            f"--with-bruteforce-up-to must be in 0..{limit}, got {args.with_bruteforce_up_to}."
        )
    frame = count_report_frame(count_reports(args.n_max, args.with_bruteforce_up_to))
    envelope = OutputEnvelope(
        command="count",
        parameters={
            "n_max": args.n_max,
            "with_bruteforce_up_to": args.with_bruteforce_up_to,
        },
        payload=frame_records(frame),
    )
    emit(envelope, args.format, out, frame)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    seed = get_default_seed() if args.seed is None else args.seed
    config = SimConfig(n=args.n, replications=args.reps, seed=seed, method=args.method)
    summary = run(config)
    payload = summary.to_dict()
    frame = histogram_frame(summary)
    if args.check:
        result = chi_square(summary, dist_table(args.n))
        payload["chi_square"] = {
            "statistic": result.statistic,
            "dof": result.dof,
            "p_value": result.p_value,
            "cells": [list(c) for c in result.cells],
        }
        frame = frame.assign(chi_square=result.statistic, dof=result.dof, p_value=result.p_value)
        logger.info(
            "chi-square %.4f on %d dof (p=%.4g)", result.statistic, result.dof, result.p_value
        )
    envelope = OutputEnvelope(
        command="simulate",
        parameters={
            "n": args.n,
            "reps": args.reps,
            "seed": seed,
            "method": args.method,
            "check": args.check,
        },
        payload=payload,
    )
    emit(envelope, args.format, out, frame)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    results = run_checks(args.level, args.only or None)
    for result in results:
        out.write(result.line() + "\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error("verify: failed checks %s", ", ".join(failed))
        return EXIT_CONSISTENCY
    return EXIT_OK


def cmd_eval_gf(args: argparse.Namespace, out: TextIO) -> int:
    value = closed_form_eval(args.z, args.u, order_fallback=args.order_fallback, form=args.form)
    envelope = OutputEnvelope(
        command="eval-gf",
        parameters={
            "z": args.z,
            "u": args.u,
            "form": args.form,
            "order_fallback": args.order_fallback,
        },
        payload=[{"z": args.z, "u": args.u, "form": args.form, "value": value}],
    )
    emit(envelope, args.format, out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, TextIO], int]] = {
    "dist": cmd_dist,
    "moments": cmd_moments,
    "count": cmd_count,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "eval-gf": cmd_eval_gf,
}


# ==============================================================================
# Parser
# ==============================================================================


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="necklace",
        description="Exact, asymptotic and simulated laws of the two-colour necklace process.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_format(p: argparse.ArgumentParser, default: str = "csv") -> None:
        p.add_argument("--format", choices=FORMATS, default=default)

    p = sub.add_parser("dist", help="exact law table P(W_n = k)")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--counts", action="store_true", help="emit integer process counts")
    with_format(p)

    p = sub.add_parser("moments", help="exact means and variances")
    p.add_argument("--n-max", type=int, required=True)
    with_format(p)

    p = sub.add_parser("count", help="necklace counts and asymptotic estimate")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--with-bruteforce-up-to", type=int, default=0, metavar="K")
    with_format(p)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default="markov")
    p.add_argument("--check", action="store_true", help="chi-square against the exact law")
    with_format(p, default="json")

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--level", choices=LEVELS, default="quick")
    p.add_argument("--only", action="append", choices=list(CHECKS), metavar="CHECK")

    p = sub.add_parser("eval-gf", help="evaluate the closed-form generating function")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--form", choices=CLOSED_FORMS, default="coth")
    p.add_argument("--order-fallback", type=_positive_int, default=None)
    with_format(p, default="json")

    return parser


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Run one subcommand and return its exit code."""
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        logging.basicConfig(
            level=get_log_level(),
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        return COMMANDS[args.command](args, out)
    except NecklaceLabError as e:
        logger.error("necklace %s: %s: %s", args.command, type(e).__name__, e)
        return e.exit_code
    except Exception:
        logger.exception("necklace %s: unexpected failure", args.command)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

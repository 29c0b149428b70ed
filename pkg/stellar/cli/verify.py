"""`stellar verify`: randomized property suites"""

from __future__ import annotations

import argparse
import logging

from stellar.cli.io import write_document
from stellar.config import get_settings
from stellar.errors import VerificationFailure
from stellar.services.verification import SUITES, run_suites

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "verify",
        help="Run property suites",
        description="Run the invariant suites and write a JSON report; exits 3 on failure.",
    )
    parser.add_argument(
        "--suite",
        action="append",
        choices=[*SUITES, "all"],
        help="Suite to run (repeatable, default all)",
    )
    parser.add_argument("--n", type=int, default=None, help="Size parameter (2J or N) for the suites")
    parser.add_argument("--trials", type=int, default=20, help="Random trials per suite")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = run_suites(args.suite or ["all"], args.trials, get_settings().seed, args.n)
    write_document(report, args.out)
    for suite in report.suites:
        for prop in suite.properties:
            logger.info(
                "%s/%s %.3e (limit %.1e)",
                suite.name,
                prop.name,
                prop.max_deviation,
                prop.threshold,
                extra={
                    "suite": suite.name,
                    "property": prop.name,
                    "max_deviation": prop.max_deviation,
                    "threshold": prop.threshold,
                    "passed": prop.passed,
                },
            )
    if not report.passed:
        failed = ", ".join(s.name for s in report.suites if not s.passed)
        raise VerificationFailure(f"verification failed: {failed}", report)
    return 0

"""Command-line entry point"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from stellar import __version__
from stellar.cli import decompose, dims, evolve, points, verify
from stellar.config import override_settings
from stellar.errors import DomainError, StateFileError, VerificationFailure
from stellar.utils.logging_config import LEVELS, configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_VERIFICATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stellar",
        description="""
Majorana constellations of spin states and Schur-Weyl decompositions of
N-qubit states, emitted as JSON for external plotting.
""",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--out", default=None, help="Output file (default stdout)")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (default 42)")
    parser.add_argument("--eps", type=float, default=None, help="Clustering tolerance (default 1e-6)")
    parser.add_argument("--nmax", type=int, default=None, help="Largest accepted N (default 12)")
    parser.add_argument(
        "--log-level", type=str.upper, choices=LEVELS, default=None, help="Logging level (default INFO)"
    )

    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (points, decompose, evolve, verify, dims):
        module.add_parser(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = override_settings(
        seed=args.seed, cluster_eps=args.eps, nmax=args.nmax, log_level=args.log_level
    )
    configure_logging(settings.log_level)
    if args.eps is not None and args.eps <= 0:
        logger.error("--eps must be positive")
        return EXIT_DOMAIN

    try:
        return args.handler(args)
    except (StateFileError, OSError) as exc:
        logger.error(str(exc))
        return EXIT_IO
    except VerificationFailure as exc:
        logger.error(str(exc))
        return EXIT_VERIFICATION
    except DomainError as exc:
        logger.error(str(exc))
        return EXIT_DOMAIN
    except ValidationError as exc:
        logger.error("invalid input: %s", exc.errors()[0]["msg"])
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

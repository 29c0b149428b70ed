"""`stellar points`: Majorana constellation of a spin state or symmetric qubit state"""

from __future__ import annotations

import argparse
import logging

from stellar.cli.constellations import spin_constellation
from stellar.cli.io import load_state, write_document
from stellar.models.domain import MultiQubitState
from stellar.models.schemas import PointsReport
from stellar.services.majorana import majorana_points, majorana_poly
from stellar.services.polyroots import root_residuals
from stellar.services.schur import symmetric_spin_state
from stellar.utils.normalization import format_half

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-8


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "points",
        help="Majorana points of a spin state",
        description="Write the Majorana constellation of a spin-J state or of a "
        "permutation-symmetric N-qubit state.",
    )
    parser.add_argument("state", help="StateFile (kind spin, or kind qubits if symmetric)")
    parser.add_argument(
        "--verbose", action="store_true", help="Include polynomial root residuals"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    state = load_state(args.state)
    if isinstance(state, MultiQubitState):
        state = symmetric_spin_state(state, SYMMETRY_TOL)
        logger.info("read symmetric %d-qubit state as spin %s", state.two_j, format_half(state.two_j))

    constellation = spin_constellation(state, args.eps)
    if not args.verbose:
        write_document(constellation, args.out)
        return 0

    poly = majorana_poly(state)
    finite = majorana_points(state, args.eps).source_roots.finite_roots
    residuals = root_residuals(poly.coeffs, finite).tolist() if len(finite) else []
    report = PointsReport(j=format_half(state.two_j), constellation=constellation, root_residuals=residuals)
    write_document(report, args.out)
    return 0

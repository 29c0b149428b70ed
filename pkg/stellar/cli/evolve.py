"""`stellar evolve`: collective, permutation and logical evolutions"""

from __future__ import annotations

import argparse
import logging

from stellar.cli.constellations import state_constellation
from stellar.cli.io import load_matrix, load_state, state_document, write_document
from stellar.cli.parsing import parse_cycles, parse_euler, parse_su2
from stellar.errors import DomainError
from stellar.models.domain import MultiQubitState, SpinState
from stellar.services import dfs
from stellar.services.bloch import check_invertible
from stellar.services.majorana import apply_gl2, collective_rotation
from stellar.services.schur import apply_collective, apply_permutation

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "evolve",
        help="Apply a collective, permutation or logical evolution",
        description="Evolve a state and write the resulting StateFile.",
    )
    parser.add_argument("state", help="StateFile to evolve")
    action = parser.add_mutually_exclusive_group(required=True)
    action.add_argument("--matrix", metavar="FILE", help="JSON 2x2 complex matrix m, applied as m^{⊗N}")
    action.add_argument(
        "--su2",
        metavar="AXIS,ANGLE",
        help="exp(i angle n·sigma) on every qubit; axis x, y, z or nx:ny:nz; angle like pi/3",
    )
    action.add_argument("--perm", metavar="CYCLES", help="Qubit permutation in cycle notation, e.g. '(12)'")
    action.add_argument(
        "--logical", metavar="ALPHA,BETA,GAMMA", help="Euler-angle logical rotation (3 qubits)"
    )
    parser.add_argument("--before", metavar="FILE", help="Write the input constellation here")
    parser.add_argument("--after", metavar="FILE", help="Write the evolved constellation here")
    parser.set_defaults(handler=run)


def evolve(state, args: argparse.Namespace):
    if args.matrix or args.su2:
        if args.matrix:
            m = check_invertible(load_matrix(args.matrix))
        else:
            axis, angle = parse_su2(args.su2)
            m = collective_rotation(axis, angle)
        if isinstance(state, SpinState):
            return apply_gl2(state, m)
        return apply_collective(state, m)

    if not isinstance(state, MultiQubitState):
        raise DomainError("--perm and --logical need a state file of kind 'qubits'")
    if args.perm:
        return apply_permutation(state, parse_cycles(args.perm, state.n_qubits))
    return dfs.apply_logical(state, *parse_euler(args.logical))


def run(args: argparse.Namespace) -> int:
    state = load_state(args.state)
    evolved = evolve(state, args)
    if args.before:
        write_document(state_constellation(state, args.eps), args.before)
    if args.after:
        write_document(state_constellation(evolved, args.eps), args.after)
    write_document(state_document(evolved), args.out)
    return 0

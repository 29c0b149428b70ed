"""`stellar decompose`: representation and multiplicity spheres of an N-qubit state"""

from __future__ import annotations

import argparse

import numpy as np

from stellar.cli.constellations import decomposition_constellation
from stellar.cli.io import load_state, write_document
from stellar.errors import DomainError
from stellar.models.domain import MultiQubitState
from stellar.models.schemas import BlockSummary, DecompositionReport
from stellar.services.schur import decompose, reconstruct
from stellar.utils.normalization import format_half


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "decompose",
        help="Schur-Weyl decomposition of a qubit state",
        description="Split an N-qubit state into representation states and a "
        "multiplicity state and write both spheres with the |xi| table.",
    )
    parser.add_argument("state", help="StateFile of kind qubits")
    parser.add_argument(
        "--multiplicity-majorana",
        action="store_true",
        help="Draw multiplicity states with d_j > 2 as (d_j - 1)-point constellations",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    state = load_state(args.state)
    if not isinstance(state, MultiQubitState):
        raise DomainError("decompose needs a state file of kind 'qubits'")

    decomposition = decompose(state)
    residual = float(np.max(np.abs(reconstruct(decomposition).amps - state.amps)))
    blocks = [
        BlockSummary(
            j=format_half(b.two_j),
            alpha=b.alpha,
            path=b.path.label(),
            xi=(b.xi.real, b.xi.imag),
            xi_abs=abs(b.xi),
        )
        for b in decomposition.blocks
    ]
    report = DecompositionReport(
        n_qubits=state.n_qubits,
        blocks=blocks,
        reconstruction_residual=residual,
        constellation=decomposition_constellation(
            decomposition, args.eps, args.multiplicity_majorana
        ),
    )
    write_document(report, args.out)
    return 0

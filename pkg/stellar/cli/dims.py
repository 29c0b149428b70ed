"""`stellar dims`: irrep dimensions of (C^d)^{⊗N}"""

from __future__ import annotations

import argparse

from stellar.cli.io import write_document
from stellar.models.schemas import DimensionTable, SpinMultiplicity
from stellar.services.schur import irrep_dimensions, multiplicity_dim, spin_values
from stellar.utils.normalization import format_half, half


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "dims",
        help="Irrep dimensions of the N-fold tensor power",
        description="List (partition, dim GL, dim S) rows; for d = 2 also the (j, d_j) view.",
    )
    parser.add_argument("--n", type=int, required=True, help="Number of tensor factors")
    parser.add_argument("--d", type=int, default=2, help="Local dimension (default 2)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    rows = irrep_dimensions(args.n, args.d)
    spin_view = None
    if args.d == 2:
        spin_view = [
            SpinMultiplicity(j=format_half(two_j), multiplicity=multiplicity_dim(args.n, half(two_j)))
            for two_j in spin_values(args.n)
        ]
    table = DimensionTable(
        n=args.n,
        d=args.d,
        rows=rows,
        total=sum(row.dim_gl * row.dim_s for row in rows),
        spin_view=spin_view,
    )
    write_document(table, args.out)
    return 0

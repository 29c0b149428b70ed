#!/usr/bin/env python
"""Write the sphere data behind the demo figures as ConstellationFile documents."""

import argparse
from pathlib import Path
from typing import Dict

import numpy as np

from stellar.cli.constellations import decomposition_constellation, spin_constellation
from stellar.cli.io import render
from stellar.models.domain import BlochPoint
from stellar.models.schemas import ConstellationFile
from stellar.services import dfs
from stellar.services.majorana import (
    apply_gl2,
    biased_noon_state,
    collective_rotation,
    noon_state,
    shot_noise_state,
)
from stellar.services.schur import apply_collective, decompose
from stellar.utils.random import haar_su2


def _phase_estimation(n: int) -> Dict[str, ConstellationFile]:
    biased = biased_noon_state(n, 0.3, np.sqrt(1 - 0.09))
    tilted = apply_gl2(noon_state(n), collective_rotation(BlochPoint(n=[1, 0, 0]), np.pi / 8))
    return {
        "noon": spin_constellation(noon_state(n), None),
        "shot_noise": spin_constellation(shot_noise_state(n), None),
        "biased_noon": spin_constellation(biased, None),
        "noon_tilted": spin_constellation(tilted, None),
    }


def _logical_qubit(seed: int) -> Dict[str, ConstellationFile]:
    state = dfs.example_logical_state()
    noisy = apply_collective(state, haar_su2(np.random.default_rng(seed)))
    rotated = dfs.apply_logical(state, np.pi / 2, np.pi / 3, 0.0)
    return {
        "logical": decomposition_constellation(decompose(state), None),
        "logical_collective_noise": decomposition_constellation(decompose(noisy), None),
        "logical_rotated": decomposition_constellation(decompose(rotated), None),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description="Export constellation data for plotting")
    parser.add_argument("--out-dir", default="figures", help="Directory for the JSON files")
    parser.add_argument("--n", type=int, default=12, help="Particle number of the demo states")
    parser.add_argument("--seed", type=int, default=42, help="Seed of the collective noise")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    documents = {**_phase_estimation(args.n), **_logical_qubit(args.seed)}
    for name, document in documents.items():
        path = out_dir / f"{name}.json"
        path.write_bytes(render(document))
        print(f"Wrote {path}")

    return 0


if __name__ == "__main__":
    raise SystemExit(main())

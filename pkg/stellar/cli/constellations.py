"""Turning states and decompositions into sphere documents"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from stellar.models.domain import MultiQubitState, SchurDecomposition, SpinState
from stellar.models.schemas import ConstellationFile, ConstellationGroup, Sphere
from stellar.services.majorana import degeneracy_signature, majorana_points
from stellar.services.schur import decompose
from stellar.utils.normalization import complex_pairs, format_half


def spin_group(
    s: SpinState, eps: Optional[float], j_label: Optional[str] = None, alpha: Optional[int] = None
) -> ConstellationGroup:
    constellation = majorana_points(s, eps)
    return ConstellationGroup(
        j=j_label or format_half(s.two_j),
        alpha=alpha,
        points=[tuple(p) for p in constellation.points.tolist()],
        degeneracy=list(degeneracy_signature(constellation, eps).multiplicities),
    )


def spin_constellation(s: SpinState, eps: Optional[float]) -> ConstellationFile:
    return ConstellationFile(spheres=[Sphere(label="representation", groups=[spin_group(s, eps)])])


def decomposition_constellation(
    d: SchurDecomposition, eps: Optional[float], multiplicity_majorana: bool = False
) -> ConstellationFile:
    """
    Representation sphere: one group per (j, alpha) block with nonzero weight.
    Multiplicity sphere: one point when d_j = 2, raw amplitudes when d_j > 2
    (or a (d_j - 1)-point constellation with multiplicity_majorana).
    """
    representation: List[ConstellationGroup] = []
    for block in d.blocks:
        if block.rep_state is None or block.two_j == 0:
            continue
        representation.append(
            spin_group(block.rep_state, eps, format_half(block.two_j), block.alpha)
        )

    multiplicity: List[ConstellationGroup] = []
    for two_j, xi in d.multiplicity_state().items():
        if len(xi) < 2 or np.linalg.norm(xi) < 1e-12:
            continue
        label = format_half(two_j)
        if len(xi) == 2 or multiplicity_majorana:
            state = SpinState(two_j=len(xi) - 1, amps=xi)
            multiplicity.append(spin_group(state, eps, label))
        else:
            multiplicity.append(
                ConstellationGroup(j=label, amplitudes=complex_pairs(xi), no_sphere=True)
            )

    return ConstellationFile(
        spheres=[
            Sphere(label="representation", groups=representation),
            Sphere(label="multiplicity", groups=multiplicity),
        ]
    )


def state_constellation(state, eps: Optional[float]) -> ConstellationFile:
    if isinstance(state, MultiQubitState):
        return decomposition_constellation(decompose(state), eps)
    return spin_constellation(state, eps)

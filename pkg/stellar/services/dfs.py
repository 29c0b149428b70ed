"""Three-qubit noiseless subsystem: logical qubit in the j = 1/2 multiplicity factor"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import expm

from stellar.config import get_settings
from stellar.errors import DomainError
from stellar.models.domain import (
    LogicalOperator,
    LogicalQubit,
    LogicalReadout,
    MultiQubitState,
    SchurBlock,
    SchurDecomposition,
    SpinState,
)
from stellar.models.schemas import ImmunityReport
from stellar.services.bloch import PAULI
from stellar.services.schur import (
    apply_collective,
    decompose,
    multiplicity_density,
    permutation_op,
    reconstruct,
    schur_basis,
)
from stellar.utils.random import haar_su2

logger = logging.getLogger(__name__)

N_QUBITS = 3
HALF = Fraction(1, 2)

# Transpositions of three qubits in one-line notation
SWAP_12 = (2, 1, 3)
SWAP_13 = (3, 2, 1)
SWAP_23 = (1, 3, 2)

XI_TOL = 1e-10
LOGICAL_TOL = 1e-9
SHARED_TOL = 1e-9


# ==================== Encoding ====================


def example_logical_state() -> MultiQubitState:
    """
    Three-qubit state with xi = (0, 1/sqrt2, 1/sqrt2) and representation
    states (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2 on the two coupling paths.
    """
    r3 = np.sqrt(3.0)
    amps = np.zeros(8)
    amps[0b110] = amps[0b001] = 2.0
    amps[0b101] = amps[0b100] = -(1.0 + r3)
    amps[0b011] = amps[0b010] = -1.0 + r3
    return MultiQubitState(n_qubits=N_QUBITS, amps=amps / (2.0 * np.sqrt(6.0)))


def encode_logical(q: LogicalQubit, rep0: SpinState, rep1: SpinState) -> MultiQubitState:
    """a0 |rep0> ⊗ |alpha=0> + a1 |rep1> ⊗ |alpha=1> inside the j = 1/2 sector"""
    if rep0.two_j != 1 or rep1.two_j != 1:
        raise DomainError("representation states must have spin 1/2")
    basis = schur_basis(N_QUBITS)
    quartet, doublet = basis.sector(3), basis.sector(1)
    blocks = [SchurBlock(two_j=3, path=quartet.paths[0], alpha=0, xi=0j)]
    for alpha, (amp, rep) in enumerate(((q.a0, rep0), (q.a1, rep1))):
        blocks.append(
            SchurBlock(two_j=1, path=doublet.paths[alpha], alpha=alpha, xi=amp, rep_state=rep)
        )
    return reconstruct(SchurDecomposition(n_qubits=N_QUBITS, blocks=tuple(blocks)))


# ==================== Logical operators ====================


def _check_three(state: MultiQubitState) -> None:
    if state.n_qubits != N_QUBITS:
        raise DomainError(f"logical operations need 3 qubits, got {state.n_qubits}")


def _perm_dense(s: Tuple[int, ...]) -> np.ndarray:
    return permutation_op(s, N_QUBITS).to_dense()


def _multiplicity_action(dense: np.ndarray) -> np.ndarray:
    """<1/2, 1/2, alpha| O |1/2, 1/2, alpha'> over the two coupling paths"""
    columns = schur_basis(N_QUBITS).sector(1).vectors[:, :, 0].T
    return columns.T @ dense @ columns


def _embed(action: np.ndarray) -> np.ndarray:
    """Physical operator acting as `action` on the multiplicity factor, zero on j = 3/2"""
    vectors = schur_basis(N_QUBITS).sector(1).vectors
    dense = np.zeros((2**N_QUBITS, 2**N_QUBITS), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            dense += action[a, b] * (vectors[a] @ vectors[b].T)
    return dense


def _group_algebra_fit(dense: np.ndarray) -> Tuple[Dict[Tuple[int, ...], complex], float]:
    """Minimum-norm expansion of an operator over the six permutation operators"""
    elements = list(permutations(range(1, N_QUBITS + 1)))
    design = np.column_stack([_perm_dense(s).reshape(-1) for s in elements])
    coeffs, *_ = np.linalg.lstsq(design, dense.reshape(-1), rcond=None)
    residual = float(np.max(np.abs(design @ coeffs - dense.reshape(-1))))
    return {s: complex(c) for s, c in zip(elements, coeffs)}, residual


@lru_cache(maxsize=1)
def z_logical() -> LogicalOperator:
    """(S(13) + S(23) - 2 S(12)) / 3"""
    coefficients = {SWAP_13: 1 / 3, SWAP_23: 1 / 3, SWAP_12: -2 / 3}
    dense = sum(c * _perm_dense(s) for s, c in coefficients.items())
    return LogicalOperator(
        label="Z_L",
        matrix=dense,
        multiplicity_action=_multiplicity_action(dense),
        permutation_coefficients={s: complex(c) for s, c in coefficients.items()},
    )


def z_scale() -> float:
    """Positive constant kappa with Z_L = kappa · (involution) on the multiplicity factor"""
    eigenvalues = np.linalg.eigvalsh(z_logical().multiplicity_action)
    return float(eigenvalues[-1])


def _z_eigenvectors() -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvectors (for -kappa, +kappa) with their largest component positive"""
    _, vectors = np.linalg.eigh(z_logical().multiplicity_action)
    fixed = []
    for v in vectors.T:
        v = v * np.sign(v[np.argmax(np.abs(v))])
        fixed.append(v.astype(np.complex128))
    return fixed[0], fixed[1]


@lru_cache(maxsize=1)
def xy_logical() -> Tuple[LogicalOperator, LogicalOperator]:
    """
    Logical X and Y anchored to the eigenbasis of Z_L.

    X_L sends the +1 eigenvector to the -1 eigenvector with coefficient +1 and
    Y_L = -i |+><-| + i |-><+|. Both vanish on j = 3/2; their expansions over
    the permutation group are fitted numerically.
    """
    minus, plus = _z_eigenvectors()
    actions = {
        "X_L": np.outer(minus, plus.conj()) + np.outer(plus, minus.conj()),
        "Y_L": -1j * np.outer(plus, minus.conj()) + 1j * np.outer(minus, plus.conj()),
    }
    operators = []
    for label, action in actions.items():
        dense = _embed(action)
        coefficients, residual = _group_algebra_fit(dense)
        if residual > 1e-10:
            logger.warning("%s group algebra fit residual %.3e", label, residual)
        operators.append(
            LogicalOperator(
                label=label,
                matrix=dense,
                multiplicity_action=action,
                permutation_coefficients=coefficients,
                fit_residual=residual,
            )
        )
    return operators[0], operators[1]


def normalized_logicals() -> Tuple[LogicalOperator, LogicalOperator, LogicalOperator]:
    """X~, Y~ and Z~ = Z_L / kappa, each squaring to the projector onto j = 1/2"""
    x, y = xy_logical()
    z = z_logical()
    kappa = z_scale()
    z_tilde = LogicalOperator(
        label="Z~",
        matrix=z.matrix / kappa,
        multiplicity_action=z.multiplicity_action / kappa,
        permutation_coefficients={s: c / kappa for s, c in z.permutation_coefficients.items()},
    )
    return x, y, z_tilde


# ==================== Logical rotations ====================


def logical_unitary(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """exp(i alpha Z~) exp(i beta Y~) exp(i gamma Z~) on the 8-dimensional space"""
    _, y, z = normalized_logicals()
    return (
        expm(1j * alpha * z.matrix)
        @ expm(1j * beta * y.matrix)
        @ expm(1j * gamma * z.matrix)
    )


def euler_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """The same Euler product restricted to the multiplicity factor (alpha basis)"""
    _, y, z = normalized_logicals()
    return (
        expm(1j * alpha * z.multiplicity_action)
        @ expm(1j * beta * y.multiplicity_action)
        @ expm(1j * gamma * z.multiplicity_action)
    )


def apply_logical(state: MultiQubitState, alpha: float, beta: float, gamma: float) -> MultiQubitState:
    _check_three(state)
    return MultiQubitState(
        n_qubits=N_QUBITS, amps=logical_unitary(alpha, beta, gamma) @ np.asarray(state.amps)
    )


# ==================== Readout ====================


def decode_logical(state: MultiQubitState) -> LogicalReadout:
    """
    Read the logical qubit from the j = 1/2 multiplicity Gram matrix.

    The Gram matrix is unchanged by collective unitaries, so the readout is too.
    The gauge-fixed ratio is reported only when both paths carry the same
    representation state.

    Raises:
        DomainError: If the state is not three qubits or has no j = 1/2 weight
    """
    _check_three(state)
    decomposition = decompose(state)
    gram = multiplicity_density(decomposition, HALF)
    weight = float(np.trace(gram).real)
    if weight < 1e-12:
        raise DomainError("state has no weight in the j = 1/2 sector")
    density = gram / weight
    bloch = np.einsum("iab,ba->i", PAULI, density).real
    purity = float(np.trace(density @ density).real)

    first, second = decomposition.sector(1)
    shared = first.rep_state is None or second.rep_state is None
    if not shared:
        overlap = abs(np.vdot(first.rep_amplitudes(), second.rep_amplitudes()))
        shared = bool(overlap > 1 - SHARED_TOL)

    ratio: Optional[complex] = None
    if shared and first.rep_state is not None:
        # <xi0 psi0 | xi1 psi1> / |xi0|^2 does not depend on the phase convention
        ratio = complex(
            np.vdot(first.xi * first.rep_amplitudes(), second.xi * second.rep_amplitudes())
            / abs(first.xi) ** 2
        )
    return LogicalReadout(
        weight=weight, density=density, bloch=bloch, purity=purity, shared=shared, ratio=ratio
    )


# ==================== Collective noise ====================


def collective_noise_immunity(
    state: MultiQubitState,
    trials: int,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> ImmunityReport:
    """
    Apply Haar-random u^{⊗N} and compare the multiplicity data before and after.

    Every trial draws its own stream from SeedSequence(seed).spawn(trials).
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    workers = workers or settings.workers

    reference = decompose(state)
    xi_reference = np.array([abs(b.xi) for b in reference.blocks])
    readout = _readout_or_none(state)

    def run(child: np.random.SeedSequence) -> Tuple[float, float, Optional[float]]:
        rng = np.random.default_rng(child)
        evolved = apply_collective(state, haar_su2(rng))
        xi = np.array([abs(b.xi) for b in decompose(evolved).blocks])
        xi_dev = float(np.max(np.abs(xi - xi_reference)))
        if readout is None:
            return xi_dev, 0.0, None
        after = decode_logical(evolved)
        logical_dev = float(np.max(np.abs(after.bloch - readout.bloch)))
        ratio_dev = None
        if readout.ratio is not None and after.ratio is not None:
            ratio_dev = abs(after.ratio - readout.ratio)
        return xi_dev, logical_dev, ratio_dev

    children = np.random.SeedSequence(seed).spawn(trials)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run, children))

    xi_deviation = max(r[0] for r in results)
    logical_deviation = max(r[1] for r in results)
    ratios = [r[2] for r in results if r[2] is not None]
    ratio_deviation = max(ratios) if ratios else None
    passed = bool(
        xi_deviation <= XI_TOL
        and logical_deviation <= LOGICAL_TOL
        and (ratio_deviation is None or ratio_deviation <= LOGICAL_TOL)
    )
    if not passed:
        logger.error(
            "collective noise changed the multiplicity data (xi %.3e, logical %.3e)",
            xi_deviation,
            logical_deviation,
        )
    return ImmunityReport(
        trials=trials,
        seed=seed,
        xi_deviation=xi_deviation,
        logical_deviation=logical_deviation,
        ratio_deviation=ratio_deviation,
        shared_representation=readout.shared if readout is not None else True,
        passed=passed,
    )


def _readout_or_none(state: MultiQubitState) -> Optional[LogicalReadout]:
    if state.n_qubits != N_QUBITS:
        return None
    try:
        return decode_logical(state)
    except DomainError:
        return None

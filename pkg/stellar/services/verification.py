"""Randomized property suites behind `stellar verify`"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from stellar.config import get_settings
from stellar.errors import DomainError
from stellar.models.domain import LogicalQubit, MultiQubitState, SpinState, Spinor
from stellar.models.schemas import PropertyResult, SuiteReport, VerificationReport
from stellar.services import dfs
from stellar.services.bloch import (
    mobius_from_gl2,
    polar_decompose,
    roots_to_bloch,
    spinor_to_bloch,
    su2_to_so3,
    transform_roots,
)
from stellar.services.majorana import (
    apply_gl2,
    constellation_spinors,
    degeneracy_signature,
    majorana_points,
    majorana_poly,
    root_spinors,
    slocc_witness,
    state_from_points,
    transformed_roots,
)
from stellar.services.polyroots import find_roots
from stellar.services.schur import (
    collective_op,
    compose,
    decompose,
    multiplicity_dim,
    perm_irrep_matrix,
    permutation_op,
    reconstruct,
    schur_matrix,
    spin_values,
    verify_block_structure,
)
from stellar.utils.normalization import chordal_matrix, fidelity, multiset_deviation
from stellar.utils.random import (
    haar_su2,
    haar_unitary,
    random_invertible,
    random_spinor_vector,
    random_state_vector,
)

logger = logging.getLogger(__name__)

Trial = Callable[[np.random.Generator], Dict[str, float]]

# separation below which a planted constellation is not scored
SLOCC_SEPARATION = 0.1


def _collect(trial: Trial, trials: int, seed: int) -> Dict[str, float]:
    """Run trials on independent streams and keep the worst value per property"""
    children = np.random.SeedSequence(seed).spawn(trials)
    with ThreadPoolExecutor(max_workers=get_settings().workers) as pool:
        outcomes = list(pool.map(lambda c: trial(np.random.default_rng(c)), children))
    worst: Dict[str, float] = {}
    for outcome in outcomes:
        for name, value in outcome.items():
            worst[name] = max(worst.get(name, 0.0), value)
    return worst


def _report(
    name: str, trials: int, seed: int, deviations: Dict[str, float], thresholds: Dict[str, float]
) -> SuiteReport:
    properties = [
        PropertyResult(
            name=prop,
            max_deviation=deviations.get(prop, 0.0),
            threshold=limit,
            passed=bool(deviations.get(prop, 0.0) <= limit),
        )
        for prop, limit in thresholds.items()
    ]
    passed = all(p.passed for p in properties)
    for p in properties:
        if not p.passed:
            logger.error(
                "%s/%s failed: deviation %.3e > %.1e",
                name,
                p.name,
                p.max_deviation,
                p.threshold,
                extra={"suite": name, "property": p.name},
            )
    logger.info(
        "suite %s finished: %s",
        name,
        "pass" if passed else "FAIL",
        extra={"suite": name, "trials": trials, "seed": seed},
    )
    return SuiteReport(name=name, passed=passed, trials=trials, seed=seed, properties=properties)


def _random_spin_state(rng: np.random.Generator, max_two_j: int) -> SpinState:
    two_j = int(rng.integers(1, max_two_j + 1))
    return SpinState(two_j=two_j, amps=random_state_vector(rng, two_j + 1))


# ==================== Constellation suites ====================


def rigid_suite(trials: int, seed: int, n: Optional[int] = None) -> SuiteReport:
    """SU(2) rotates constellations rigidly; points rebuild the state"""
    max_two_j = n or 12

    def trial(rng: np.random.Generator) -> Dict[str, float]:
        s = _random_spin_state(rng, max_two_j)
        u = haar_su2(rng)
        before = majorana_points(s)
        after = majorana_points(apply_gl2(s, u))
        rebuilt = state_from_points(constellation_spinors(before), s.two_j)
        return {
            "rotation": multiset_deviation(after.points, before.points @ su2_to_so3(u).T),
            "roundtrip": 1.0 - fidelity(rebuilt.amps, s.amps),
        }

    thresholds = {"rotation": 1e-6, "roundtrip": 1e-10}
    return _report("rigid", trials, seed, _collect(trial, trials, seed), thresholds)


def mobius_suite(trials: int, seed: int, n: Optional[int] = None) -> SuiteReport:
    """Invertible collective maps move roots by the associated Mobius map"""
    max_two_j = n or 12

    def trial(rng: np.random.Generator) -> Dict[str, float]:
        s = _random_spin_state(rng, max_two_j)
        m = random_invertible(rng, 100.0)
        source = find_roots(majorana_poly(s))
        predicted = roots_to_bloch(transform_roots(mobius_from_gl2(m), source))
        image = transformed_roots(s, m)
        rebuilt = state_from_points(root_spinors(image), s.two_j)
        factors = polar_decompose(m)
        return {
            "mobius": multiset_deviation(roots_to_bloch(image), predicted),
            "image": 1.0 - fidelity(apply_gl2(s, m).amps, rebuilt.amps),
            "polar": float(np.max(np.abs(factors.u @ factors.r - m))),
        }

    thresholds = {"mobius": 1e-5, "image": 1e-10, "polar": 1e-10}
    return _report("mobius", trials, seed, _collect(trial, trials, seed), thresholds)


def _planted(n: int, kind: int) -> List[int]:
    if kind == 0:
        return [n]
    if kind == 1:
        return [n - 1, 1]
    return [2] + [1] * (n - 2)


def _repeated(vectors, multiplicities) -> List[Spinor]:
    return [Spinor.from_vector(v) for v, k in zip(vectors, multiplicities) for _ in range(k)]


def slocc_suite(trials: int, seed: int, n: Optional[int] = None) -> SuiteReport:
    """Degeneracy signatures survive invertible collective maps"""
    max_n = max(n or 6, 3)

    def trial(rng: np.random.Generator) -> Dict[str, float]:
        size = int(rng.integers(3, max_n + 1))
        multiplicities = _planted(size, int(rng.integers(3)))
        anchors = [random_spinor_vector(rng) for _ in multiplicities]
        m = random_invertible(rng, 100.0)
        for vectors in (anchors, [m @ a for a in anchors]):
            points = np.array([spinor_to_bloch(Spinor.from_vector(v)).n for v in vectors])
            distances = chordal_matrix(points, points) + 4.0 * np.eye(len(points))
            if distances.min() < SLOCC_SEPARATION:
                return {}

        s = state_from_points(_repeated(anchors, multiplicities))
        target = apply_gl2(s, m)
        planted = sorted(multiplicities, reverse=True)
        before = degeneracy_signature(majorana_points(s)).multiplicities
        after = degeneracy_signature(majorana_points(target)).multiplicities
        outcome = {"signature": float(list(before) != planted or list(after) != planted)}
        if len(multiplicities) <= 3:
            witness = slocc_witness(s, target)
            if witness is None:
                outcome["witness"] = 1.0
            else:
                outcome["witness"] = 1.0 - fidelity(apply_gl2(s, witness).amps, target.amps)
        return outcome

    thresholds = {"signature": 0.0, "witness": 1e-6}
    return _report("slocc", trials, seed, _collect(trial, trials, seed), thresholds)


# ==================== Schur suite ====================


def _composition_deviation(perms: Iterable, n: int, two_j: int) -> float:
    j = Fraction(two_j, 2)
    worst = 0.0
    for s1, s2 in perms:
        lhs = perm_irrep_matrix(compose(s1, s2), j, n)
        rhs = perm_irrep_matrix(s1, j, n) @ perm_irrep_matrix(s2, j, n)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def schur_suite(trials: int, seed: int, n: Optional[int] = None) -> SuiteReport:
    """Coupled basis, block structure and multiplicity representations"""
    max_n = n or 8

    completeness = 0.0
    for size in range(1, 15):
        total = sum((two_j + 1) * multiplicity_dim(size, Fraction(two_j, 2)) for two_j in spin_values(size))
        completeness = max(completeness, float(total != 2**size))

    orthonormality = 0.0
    for size in range(1, min(max_n, get_settings().dense_nmax) + 1):
        q = schur_matrix(size)
        orthonormality = max(orthonormality, float(np.max(np.abs(q.T @ q - np.eye(2**size)))))

    s3 = list(permutations(range(1, 4)))
    static = {
        "completeness": completeness,
        "orthonormality": orthonormality,
        "s3_composition": _composition_deviation(product(s3, s3), 3, 1),
    }

    def trial(rng: np.random.Generator) -> Dict[str, float]:
        size = int(rng.integers(2, max_n + 1))
        perm = tuple(int(v) + 1 for v in rng.permutation(size))
        u = haar_unitary(rng, 2)
        m = random_invertible(rng, 2.0)
        m = m / np.sqrt(abs(np.linalg.det(m)))
        unitary = verify_block_structure(u, perm, size)
        general = verify_block_structure(m, perm, size)

        two_j = int(rng.choice(spin_values(size)))
        slices = [perm_irrep_matrix(perm, Fraction(two_j, 2), size, Fraction(two_m, 2)) for two_m in range(two_j, -two_j - 1, -2)]
        s5 = [tuple(int(v) + 1 for v in rng.permutation(5)) for _ in range(2)]

        state = MultiQubitState(n_qubits=size, amps=random_state_vector(rng, 2**size))
        rebuilt = reconstruct(decompose(state))

        small = min(size, 8)
        c = collective_op(u, small).to_dense()
        p = permutation_op(tuple(int(v) + 1 for v in rng.permutation(small)), small).to_dense()
        return {
            "block_structure": max(
                unitary.off_block_max,
                general.off_block_max,
                *unitary.block_deviations.values(),
                *general.block_deviations.values(),
            ),
            "m_independence": max(float(np.max(np.abs(x - slices[0]))) for x in slices),
            "s5_composition": max(
                _composition_deviation([(s5[0], s5[1])], 5, two_j5) for two_j5 in spin_values(5)
            ),
            "roundtrip": float(np.max(np.abs(rebuilt.amps - state.amps))),
            "commutant": float(np.max(np.abs(c @ p - p @ c))),
        }

    deviations = {**static, **_collect(trial, trials, seed)}
    thresholds = {
        "completeness": 0.0,
        "orthonormality": 1e-10,
        "s3_composition": 1e-9,
        "block_structure": 1e-10,
        "m_independence": 1e-10,
        "s5_composition": 1e-9,
        "roundtrip": 1e-10,
        "commutant": 1e-12,
    }
    return _report("schur", trials, seed, deviations, thresholds)


# ==================== Noiseless subsystem suite ====================


def dfs_suite(trials: int, seed: int, n: Optional[int] = None) -> SuiteReport:
    """Logical operators, Euler rotations and collective-noise immunity on three qubits"""
    x, y, z = dfs.normalized_logicals()
    z_raw = dfs.z_logical()
    mx, my, mz = x.multiplicity_action, y.multiplicity_action, z.multiplicity_action
    algebra = max(
        float(np.max(np.abs(mx @ my - my @ mx - 2j * mz))),
        float(np.max(np.abs(my @ mz - mz @ my - 2j * mx))),
        float(np.max(np.abs(mz @ mx - mx @ mz - 2j * my))),
    )
    immunity = dfs.collective_noise_immunity(dfs.example_logical_state(), trials, seed)
    static = {
        "algebra": algebra,
        "group_algebra_fit": max(x.fit_residual, y.fit_residual),
        "immunity_xi": immunity.xi_deviation,
        "immunity_logical": immunity.logical_deviation,
    }

    def trial(rng: np.random.Generator) -> Dict[str, float]:
        c = collective_op(haar_unitary(rng, 2), 3).to_dense()
        commutator = max(
            float(np.max(np.abs(op.matrix @ c - c @ op.matrix))) for op in (x, y, z_raw)
        )
        angles = rng.uniform(-np.pi, np.pi, size=3)
        a0, a1 = random_state_vector(rng, 2)
        q = LogicalQubit(a0=complex(a0), a1=complex(a1))
        rep = SpinState(two_j=1, amps=random_state_vector(rng, 2))
        state = dfs.encode_logical(q, rep, rep)
        before = dfs.decode_logical(state).bloch
        after = dfs.decode_logical(dfs.apply_logical(state, *angles)).bloch
        predicted = su2_to_so3(dfs.euler_matrix(*angles)) @ before
        unitary = dfs.logical_unitary(*angles)
        return {
            "commutant": commutator,
            "euler": float(np.max(np.abs(after - predicted))),
            "unitarity": float(np.max(np.abs(unitary.conj().T @ unitary - np.eye(8)))),
        }

    deviations = {**static, **_collect(trial, trials, seed)}
    thresholds = {
        "algebra": 1e-9,
        "group_algebra_fit": 1e-10,
        "immunity_xi": dfs.XI_TOL,
        "immunity_logical": dfs.LOGICAL_TOL,
        "commutant": 1e-10,
        "euler": 1e-9,
        "unitarity": 1e-10,
    }
    return _report("dfs", trials, seed, deviations, thresholds)


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "rigid": rigid_suite,
    "mobius": mobius_suite,
    "slocc": slocc_suite,
    "schur": schur_suite,
    "dfs": dfs_suite,
}


def run_suites(
    names: Iterable[str], trials: int, seed: int, n: Optional[int] = None
) -> VerificationReport:
    selected = list(SUITES) if "all" in names else list(names)
    unknown = [name for name in selected if name not in SUITES]
    if unknown:
        raise DomainError(f"unknown suite(s): {', '.join(unknown)}")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    reports = [SUITES[name](trials, seed, n) for name in selected]
    return VerificationReport(passed=all(r.passed for r in reports), suites=reports)

"""Majorana constellations of spin-J states and the GL(2) action on them"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from math import comb, factorial
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import expm

from stellar.config import get_settings
from stellar.errors import DomainError
from stellar.models.domain import (
    BlochPoint,
    ComplexPolynomial,
    DegeneracySignature,
    ExtendedComplex,
    PointConstellation,
    RootSet,
    SpinState,
    Spinor,
)
from stellar.services.bloch import (
    PAULI,
    check_invertible,
    bloch_to_z,
    mobius_through_points,
    roots_to_bloch,
    z_to_spinor,
)
from stellar.services.polyroots import extended_context, find_roots, find_roots_extended
from stellar.utils.normalization import chordal_matrix, single_linkage

logger = logging.getLogger(__name__)

MACHINE_EPS = float(np.finfo(float).eps)


def _sqrt_binomials(two_j: int) -> np.ndarray:
    return np.sqrt(np.array([comb(two_j, k) for k in range(two_j + 1)], dtype=float))


def _signs(two_j: int) -> np.ndarray:
    return (-1.0) ** np.arange(two_j + 1)


def _padded(coeffs: np.ndarray, size: int) -> np.ndarray:
    """numpy trims trailing zero coefficients; restore the nominal length"""
    padded = np.zeros(size, dtype=np.complex128)
    padded[: len(coeffs)] = coeffs[:size]
    return padded


# ==================== State <-> constellation ====================


def majorana_poly(s: SpinState) -> ComplexPolynomial:
    """Coefficient of z^k is (-1)^k sqrt(C(2J, k)) psi_{J-k}"""
    coeffs = _signs(s.two_j) * _sqrt_binomials(s.two_j) * np.asarray(s.amps)
    return ComplexPolynomial(coeffs=coeffs, nominal_degree=s.two_j)


def majorana_points(s: SpinState, eps: Optional[float] = None) -> PointConstellation:
    """
    Map a spin-J state to its 2J Majorana points.

    Numerically fuzzed degenerate roots are consolidated onto their centroid
    before the points are formed, so d-fold points come back as d equal rows.

    Args:
        s: Normalized spin state
        eps: Clustering tolerance (chordal); defaults to cluster_eps

    Returns:
        PointConstellation with finite points first, then the north-pole points
        of the roots at infinity
    """
    settings = get_settings()
    eps = settings.cluster_eps if eps is None else eps
    if eps <= 0:
        raise DomainError("eps must be positive")

    poly = majorana_poly(s)
    roots = find_roots(poly)
    roots = consolidate_clusters(
        roots, poly.coeffs, eps, settings.cluster_search_radius, settings.snap_tolerance
    )
    return PointConstellation(points=roots_to_bloch(roots), source_roots=roots)


def state_from_points(points: Sequence[Spinor], two_j: Optional[int] = None) -> SpinState:
    """
    Symmetrized product of spinors in the |J, m> basis.

    Uses prod_i (a_i - b_i z) = sum_k (-1)^k sqrt(C(2J, k)) psi_{J-k} z^k, which is the
    projection of the tensor product onto the Dicke basis up to normalization.
    """
    if two_j is not None and len(points) != two_j:
        raise DomainError(f"spin {two_j}/2 needs {two_j} spinors, got {len(points)}")
    if not points:
        raise DomainError("at least one spinor is required")
    two_j = len(points)
    coeffs = np.ones(1, dtype=np.complex128)
    for spinor in points:
        coeffs = P.polymul(coeffs, np.array([spinor.c0, -spinor.c1]))
    amps = _signs(two_j) * _padded(coeffs, two_j + 1) / _sqrt_binomials(two_j)
    return SpinState(two_j=two_j, amps=amps)


def constellation_spinors(c: PointConstellation) -> List[Spinor]:
    """One spinor per Majorana point, taken from the exact source roots"""
    return root_spinors(c.source_roots)


def root_spinors(roots: RootSet) -> List[Spinor]:
    spinors = [z_to_spinor(ExtendedComplex.finite(z)) for z in roots.finite_roots]
    spinors += [Spinor(c0=1.0, c1=0.0)] * roots.infinity_count
    return spinors


# ==================== GL(2) action ====================


def sym_power(m: np.ndarray, two_j: int) -> np.ndarray:
    """
    Action of m^{⊗2J} on the symmetric subspace in the Dicke basis.

    Column k expands sqrt(C(n, k)) (m00 + m10 t)^{n-k} (m01 + m11 t)^k and reads
    the coefficient of t^k' divided by sqrt(C(n, k')).
    """
    if two_j < 0:
        raise DomainError("two_j must be nonnegative")
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
    first = np.array([m[0, 0], m[1, 0]])
    second = np.array([m[0, 1], m[1, 1]])
    roots = _sqrt_binomials(two_j)
    result = np.zeros((two_j + 1, two_j + 1), dtype=np.complex128)
    for k in range(two_j + 1):
        column = P.polymul(P.polypow(first, two_j - k), P.polypow(second, k))
        result[:, k] = roots[k] * _padded(column, two_j + 1) / roots
    return result


def apply_gl2(s: SpinState, m: np.ndarray) -> SpinState:
    m = check_invertible(m)
    return SpinState(two_j=s.two_j, amps=sym_power(m, s.two_j) @ s.amps)


def transformed_roots(s: SpinState, m: np.ndarray, dps: Optional[int] = None) -> RootSet:
    """
    Roots of the Majorana polynomial of apply_gl2(s, m), formed and solved at
    dps digits.

    A complex128 image state fixes a d-fold cluster of roots only to about
    eps_mach^(1/d) of its size, so the image polynomial is built from the
    amplitudes of s directly: with f(z) = (m00 z + m01) / (m10 z + m11),
    q(w) = sum_k c_k (m11 w - m01)^k (m00 - m10 w)^(2J-k) vanishes at every f(z_i).
    """
    m = check_invertible(m)
    dps = get_settings().extended_dps if dps is None else dps
    n = s.two_j
    ctx = extended_context(dps)
    a, b, c, d = (ctx.mpc(complex(x)) for x in m.ravel())
    numerator, denominator = [-b, d], [a, -c]
    image = [ctx.mpc(0)] * (n + 1)
    for k, ck in enumerate(majorana_poly(s).coeffs):
        if ck == 0:
            continue
        term = _mp_polymul(_mp_polypow(numerator, k), _mp_polypow(denominator, n - k))
        for i, t in enumerate(term):
            image[i] += ctx.mpc(complex(ck)) * t
    return find_roots_extended(image, n, dps)


def _mp_polymul(p: List, q: List) -> List:
    out = [0 * p[0]] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _mp_polypow(p: List, k: int) -> List:
    out = [p[0] ** 0]
    for _ in range(k):
        out = _mp_polymul(out, p)
    return out


def collective_rotation(axis: BlochPoint, phi: float) -> np.ndarray:
    """exp(i phi n·sigma)"""
    generator = np.einsum("i,iab->ab", axis.n, PAULI)
    return expm(1j * phi * generator)


# ==================== Degeneracy ====================


def degeneracy_signature(c: PointConstellation, eps: Optional[float] = None) -> DegeneracySignature:
    eps = get_settings().cluster_eps if eps is None else eps
    if eps <= 0:
        raise DomainError("eps must be positive")
    if len(c.points) == 0:
        return DegeneracySignature(multiplicities=())
    groups = single_linkage(c.points, eps)
    return DegeneracySignature(multiplicities=[len(g) for g in groups])


def snap_spread(multiplicity: int, eps: float) -> float:
    """
    Largest chordal diameter a cluster of the given multiplicity may have and
    still be snapped. A d-fold root computed in double precision spreads by
    about eps_mach^(1/d), so the bound is eps at d = 2 and grows with d.
    """
    if multiplicity < 2:
        return 0.0
    return eps * MACHINE_EPS ** (1.0 / multiplicity - 0.5)


def consolidate_clusters(
    roots: RootSet,
    coeffs: np.ndarray,
    eps: float,
    search_radius: float,
    snap_tolerance: float,
) -> RootSet:
    """
    Snap numerically fuzzed multiple roots onto one point.

    A candidate cluster of d roots is worked in the chart (z or 1/z) where its
    centroid lies in the closed unit disk. Its centre is polished as the nearby
    root of the (d-1)-th derivative of the chart polynomial, and the cluster is
    accepted as one d-fold root when every lower derivative vanishes there to
    within snap_tolerance of its absolute-coefficient scale. Rejected clusters
    are split at a quarter of the radius and retried down to eps. Clusters wider
    than snap_spread are never merged, so distinct close roots stay distinct.
    """
    values: List[Optional[complex]] = list(roots.finite_roots) + [None] * roots.infinity_count
    if len(values) < 2:
        return roots
    points = roots_to_bloch(roots)
    snapped: List[Optional[complex]] = list(values)
    coeffs = np.asarray(coeffs, dtype=np.complex128)

    def settle(members: List[int], radius: float) -> None:
        if len(members) < 2:
            return
        centre = False
        diameter = float(np.max(chordal_matrix(points[members], points[members])))
        if diameter <= snap_spread(len(members), eps):
            centre = _snap_centre(
                [values[i] for i in members], points[members], coeffs, snap_tolerance
            )
        if centre is not False:
            for i in members:
                snapped[i] = centre
            logger.debug("snapped %d roots onto one point", len(members))
            return
        if radius / 4 < eps:
            return
        for group in single_linkage(points[members], radius / 4):
            settle([members[i] for i in group], radius / 4)

    for group in single_linkage(points, search_radius):
        settle(group, search_radius)

    finite = [v for v in snapped if v is not None]
    return RootSet(finite_roots=finite, infinity_count=len(snapped) - len(finite))


def _snap_centre(
    members: List[Optional[complex]],
    member_points: np.ndarray,
    coeffs: np.ndarray,
    snap_tolerance: float,
    max_steps: int = 60,
):
    """Common point of a cluster that passes the derivative test, else False"""
    if all(v is None for v in members):
        return None
    reciprocal = float(np.mean(member_points[:, 2])) > 0
    if reciprocal:
        chart = np.array([0j if v is None else 1.0 / v for v in members])
        poly = coeffs[::-1]
    else:
        if any(v is None for v in members):
            return False
        chart = np.array(members, dtype=np.complex128)
        poly = coeffs
    multiplicity = len(members)
    if multiplicity >= len(poly):
        return False

    start = complex(chart.mean())
    spread = float(np.max(np.abs(chart - start)))
    guide = P.polyder(poly, multiplicity - 1)
    slope = P.polyder(guide)
    centre = start
    for _ in range(max_steps):
        denominator = P.polyval(centre, slope)
        if denominator == 0:
            break
        step = P.polyval(centre, guide) / denominator
        centre -= step
        if abs(step) <= 1e-15 * (1.0 + abs(centre)):
            break
    if not np.isfinite(centre) or abs(centre - start) > 2.0 * spread + 1e-12:
        return False

    magnitude = np.abs(poly)
    for order in range(multiplicity - 1):
        value = abs(P.polyval(centre, P.polyder(poly, order)))
        scale = P.polyval(abs(centre), P.polyder(magnitude, order))
        if value > snap_tolerance * scale:
            return False

    if not reciprocal:
        return complex(centre)
    return None if centre == 0 else complex(1.0 / centre)


# ==================== Demo constructions ====================


def noon_state(n: int) -> SpinState:
    """(|0>^N + |1>^N)/sqrt(2) as a spin-N/2 state"""
    return biased_noon_state(n, 1.0, 1.0)


def biased_noon_state(n: int, alpha: complex, beta: complex) -> SpinState:
    """alpha|0>^N + beta|1>^N; points on a circle of constant latitude"""
    if n < 1:
        raise DomainError("N must be positive")
    amps = np.zeros(n + 1, dtype=np.complex128)
    amps[0] += alpha
    amps[n] += beta
    return SpinState(two_j=n, amps=amps)


def shot_noise_state(n: int) -> SpinState:
    """((|0> + |1>)/sqrt(2))^{⊗N}: one N-fold point at (1, 0, 0)"""
    plus = Spinor(c0=1.0, c1=1.0)
    return state_from_points([plus] * n)


def biased_noon_latitude(n: int, alpha: complex, beta: complex) -> float:
    """z-coordinate of the circle carrying the points of alpha|0>^N + beta|1>^N"""
    if beta == 0:
        return 1.0
    r2 = (abs(alpha) / abs(beta)) ** (2.0 / n)
    return (r2 - 1.0) / (r2 + 1.0)


def photon_polarization_state(polarizations: Sequence[Tuple[complex, complex]]) -> SpinState:
    """
    prod_n (alpha_n a_H^dag + beta_n a_V^dag)|vac> mapped to |N/2, (n_H - n_V)/2>.

    The creation-operator product is expanded as a polynomial in a_V^dag/a_H^dag;
    |n_H, n_V> carries the factor sqrt(n_H! n_V!).
    """
    if not polarizations:
        raise DomainError("at least one photon is required")
    n = len(polarizations)
    creation = np.ones(1, dtype=np.complex128)
    for alpha, beta in polarizations:
        creation = P.polymul(creation, np.array([alpha, beta], dtype=np.complex128))
    fock = np.array(
        [np.sqrt(float(factorial(n - v) * factorial(v))) for v in range(n + 1)]
    )
    # index v counts vertical photons: m = (n_H - n_V)/2 = N/2 - v
    return SpinState(two_j=n, amps=_padded(creation, n + 1) * fock)


# ==================== Rotation sensitivity ====================


def rotation_fidelity_profile(
    s: SpinState, axis: BlochPoint, samples: int, workers: Optional[int] = None
) -> List[Tuple[float, float]]:
    """|<s|U_J(phi)|s>| at phi = 2 pi k / samples, U_J = sym_power(exp(i phi n·sigma))"""
    if samples < 2:
        raise DomainError("samples must be at least 2")
    phis = 2 * np.pi * np.arange(samples) / samples
    amps = np.asarray(s.amps)

    def overlap(phi: float) -> float:
        rotated = sym_power(collective_rotation(axis, phi), s.two_j) @ amps
        return float(abs(np.vdot(amps, rotated)))

    workers = workers or get_settings().workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        values = list(pool.map(overlap, phis))
    return list(zip(phis.tolist(), values))


# ==================== SLOCC classes ====================


def slocc_witness(
    a: SpinState, b: SpinState, eps: Optional[float] = None
) -> Optional[np.ndarray]:
    """
    Invertible m with apply_gl2(a, m) equal to b up to phase, for constellations
    with at most three distinct points.

    Returns None when the degeneracy signatures differ.

    Raises:
        DomainError: If either constellation has more than three distinct points
    """
    if a.two_j != b.two_j:
        raise DomainError("states have different spin")
    eps = get_settings().cluster_eps if eps is None else eps
    ca, cb = majorana_points(a, eps), majorana_points(b, eps)
    groups_a = single_linkage(ca.points, eps)
    groups_b = single_linkage(cb.points, eps)
    if len(groups_a) > 3 or len(groups_b) > 3:
        raise DomainError("no SLOCC criterion beyond three distinct points")
    if sorted(map(len, groups_a)) != sorted(map(len, groups_b)):
        return None

    groups_a.sort(key=len)
    groups_b.sort(key=len)
    src = [bloch_to_z(BlochPoint(n=ca.points[g].mean(axis=0))) for g in groups_a]
    dst = [bloch_to_z(BlochPoint(n=cb.points[g].mean(axis=0))) for g in groups_b]
    # pad to three distinct anchors with matching auxiliary points
    spare = [ExtendedComplex.finite(v) for v in (0.3 + 0.1j, -0.7 + 0.2j, 1.9 - 0.4j)]
    while len(src) < 3:
        src.append(next(p for p in spare if _distinct(p, src)))
        dst.append(next(p for p in spare if _distinct(p, dst)))
    return mobius_through_points(src, dst).matrix


def _distinct(p: ExtendedComplex, existing: List[ExtendedComplex]) -> bool:
    for q in existing:
        if q.is_infinite or p.is_infinite:
            if q.is_infinite and p.is_infinite:
                return False
            continue
        if abs(q.value - p.value) < 1e-6:
            return False
    return True


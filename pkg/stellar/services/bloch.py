"""Spinors, stereographic coordinates, Bloch vectors and the GL(2) maps between them

Conventions: |0> is the north pole, z = c0 / c1 = e^{-i phi} cot(theta / 2), and the
point at infinity is carried explicitly as ExtendedComplex.infinity().
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.linalg import polar

from stellar.errors import DomainError, NonUnitaryError, SingularMatrixError
from stellar.models.domain import (
    BlochPoint,
    ExtendedComplex,
    MobiusMap,
    PolarFactors,
    RootSet,
    Spinor,
)

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
NORTH = np.array([0.0, 0.0, 1.0])

SINGULAR_DET = 1e-12
UNITARY_TOL = 1e-10


# ==================== Point conversions ====================


def spinor_to_z(s: Spinor) -> ExtendedComplex:
    if abs(s.c1) > 0:
        return ExtendedComplex.finite(s.c0 / s.c1)
    return ExtendedComplex.infinity()


def z_to_spinor(z: ExtendedComplex) -> Spinor:
    """Spinor with c1 real nonnegative (c0 = 1 at infinity)"""
    if z.is_infinite:
        return Spinor(c0=1.0, c1=0.0)
    norm = np.hypot(1.0, abs(z.value))
    return Spinor(c0=z.value / norm, c1=1.0 / norm)


def z_to_bloch(z: ExtendedComplex) -> BlochPoint:
    if z.is_infinite:
        return BlochPoint(n=NORTH)
    return BlochPoint(n=finite_to_bloch(np.array([z.value]))[0])


def bloch_to_z(n: BlochPoint) -> ExtendedComplex:
    x, y, zc = n.n
    if zc > 0:
        # (nx - i ny)/(1 - nz) rewritten to stay accurate near the north pole
        den = complex(x, y)
        if den == 0:
            return ExtendedComplex.infinity()
        return ExtendedComplex.finite((1.0 + zc) / den)
    return ExtendedComplex.finite(complex(x, -y) / (1.0 - zc))


def spinor_to_bloch(s: Spinor) -> BlochPoint:
    overlap = np.conj(s.c0) * s.c1
    return BlochPoint(
        n=[2 * overlap.real, 2 * overlap.imag, abs(s.c0) ** 2 - abs(s.c1) ** 2]
    )


def bloch_to_spinor(n: BlochPoint) -> Spinor:
    return z_to_spinor(bloch_to_z(n))


def finite_to_bloch(z: np.ndarray) -> np.ndarray:
    """Vectorized stereographic map of finite coordinates to unit vectors"""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    points = np.empty((len(z), 3))
    inner = np.abs(z) <= 1.0
    zi = z[inner]
    d = 1.0 + np.abs(zi) ** 2
    points[inner] = np.column_stack([2 * zi.real / d, -2 * zi.imag / d, (np.abs(zi) ** 2 - 1) / d])
    # outside the unit disk work with w = 1/z
    w = 1.0 / z[~inner]
    d = 1.0 + np.abs(w) ** 2
    points[~inner] = np.column_stack([2 * w.real / d, 2 * w.imag / d, (1 - np.abs(w) ** 2) / d])
    return points


def roots_to_bloch(roots: RootSet) -> np.ndarray:
    """Bloch vectors of a root multiset, roots at infinity mapped to the north pole"""
    finite = finite_to_bloch(roots.finite_roots)
    north = np.tile(NORTH, (roots.infinity_count, 1))
    return np.vstack([finite, north]) if len(north) else finite


def chordal_distance(a: ExtendedComplex, b: ExtendedComplex) -> float:
    return float(np.linalg.norm(z_to_bloch(a).n - z_to_bloch(b).n))


# ==================== Group maps ====================


def su2_to_so3(u: np.ndarray) -> np.ndarray:
    """
    Rotation R with R_ij = Tr(sigma_i u sigma_j u^dagger) / 2.

    Raises:
        NonUnitaryError: If u is not unitary within 1e-10
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
        raise NonUnitaryError("su2_to_so3 needs a 2x2 unitary matrix")
    rotated = np.einsum("ab,jbc,cd->jad", u, PAULI, u.conj().T)
    return 0.5 * np.einsum("iab,jba->ij", PAULI, rotated).real


def polar_decompose(m: np.ndarray) -> PolarFactors:
    """
    Unique factorization m = u @ r of an invertible 2x2 matrix.

    Raises:
        SingularMatrixError: If |det m| <= 1e-12
    """
    m = check_invertible(m)
    u, r = polar(m, side="right")
    r = 0.5 * (r + r.conj().T)
    return PolarFactors(u=u, r=r)


def mobius_from_gl2(m: np.ndarray) -> MobiusMap:
    m = check_invertible(m)
    return MobiusMap(a=m[0, 0], b=m[0, 1], c=m[1, 0], d=m[1, 1])


def apply_mobius(f: MobiusMap, z: ExtendedComplex) -> ExtendedComplex:
    if z.is_infinite:
        if f.c == 0:
            return ExtendedComplex.infinity()
        return ExtendedComplex.finite(f.a / f.c)
    den = f.c * z.value + f.d
    if den == 0:
        return ExtendedComplex.infinity()
    return ExtendedComplex.finite((f.a * z.value + f.b) / den)


def transform_roots(f: MobiusMap, roots: RootSet) -> RootSet:
    """Image of a whole root multiset, roots at infinity included"""
    images = [apply_mobius(f, ExtendedComplex.finite(r)) for r in roots.finite_roots]
    images += [apply_mobius(f, ExtendedComplex.infinity())] * roots.infinity_count
    finite = [p.value for p in images if not p.is_infinite]
    return RootSet(finite_roots=finite, infinity_count=len(images) - len(finite))


def mobius_through_points(
    src: Sequence[ExtendedComplex], dst: Sequence[ExtendedComplex]
) -> MobiusMap:
    """Unique Mobius map sending three distinct points to three distinct points"""
    forward = _to_standard_triple(src)
    backward = _to_standard_triple(dst)
    return mobius_from_gl2(np.linalg.solve(backward, forward))


def _to_standard_triple(points: Sequence[ExtendedComplex]) -> np.ndarray:
    """Matrix of the map sending (z1, z2, z3) to (0, 1, infinity)"""
    if len(points) != 3:
        raise DomainError("three points are needed")
    values = [p.value for p in points]
    for i in range(3):
        for k in range(i + 1, 3):
            if values[i] == values[k] or (
                values[i] is not None and values[k] is not None and abs(values[i] - values[k]) < 1e-12
            ):
                raise DomainError("points must be distinct")
    z1, z2, z3 = values
    if z1 is None:
        return np.array([[0, z2 - z3], [1, -z3]], dtype=np.complex128)
    if z2 is None:
        return np.array([[1, -z1], [1, -z3]], dtype=np.complex128)
    if z3 is None:
        return np.array([[1, -z1], [0, z2 - z1]], dtype=np.complex128)
    return np.array(
        [[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]], dtype=np.complex128
    )


def check_invertible(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
    if abs(np.linalg.det(m)) <= SINGULAR_DET:
        raise SingularMatrixError("matrix is singular (|det| <= 1e-12)")
    return m

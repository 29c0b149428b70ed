"""Simultaneous root finding for complex polynomials with roots at infinity"""

from __future__ import annotations

import logging
from typing import Optional, Sequence, Tuple

import mpmath
import numpy as np
from numpy.polynomial import polynomial as P

from stellar.config import get_settings
from stellar.errors import DomainError, RootFindingError, ZeroPolynomialError
from stellar.models.domain import ComplexPolynomial, RootSet

logger = logging.getLogger(__name__)

# Angular offset of the starting circle; breaks the symmetry of real polynomials
START_PHASE = 0.4


def find_roots(p: ComplexPolynomial, tol: Optional[float] = None) -> RootSet:
    """
    Find all roots of p, counting the deficiency of its leading coefficients as
    roots at infinity.

    Args:
        p: Polynomial with ascending coefficients padded to its nominal degree
        tol: Relative residual bound; defaults to the configured root_tolerance

    Returns:
        RootSet whose finite roots are sorted by real then imaginary part

    Raises:
        ZeroPolynomialError: If every coefficient vanishes
        RootFindingError: If neither Aberth iteration nor the companion matrix
            meets the residual bound
    """
    settings = get_settings()
    tol = settings.root_tolerance if tol is None else tol
    if tol <= 0:
        raise DomainError("tol must be positive")

    coeffs = np.asarray(p.coeffs)
    scale = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
    if scale == 0.0:
        raise ZeroPolynomialError()

    significant = np.nonzero(np.abs(coeffs) > settings.root_zero_threshold * scale)[0]
    top = int(significant[-1])
    infinity_count = p.nominal_degree - top
    trimmed = coeffs[: top + 1]

    # Exact zeros at the origin are factored out before iterating
    low = int(np.nonzero(trimmed != 0)[0][0])
    core = trimmed[low:]
    origin = np.zeros(low, dtype=np.complex128)

    if len(core) == 1:
        return RootSet(finite_roots=origin, infinity_count=infinity_count)

    candidates = []
    roots, converged = _aberth(core, settings.root_max_sweeps)
    if roots is not None:
        candidates.append(("aberth", roots))
    if not converged:
        logger.warning(
            "Aberth iteration stalled at degree %d; using companion eigenvalues", len(core) - 1
        )
        candidates.append(("companion", P.polyroots(core).astype(np.complex128)))

    best_name, best_roots, best_residual = None, None, np.inf
    for name, found in candidates:
        full = np.concatenate([origin, found])
        residual = float(np.max(root_residuals(trimmed, full))) if len(full) else 0.0
        if residual <= tol:
            return RootSet(finite_roots=_sorted(full), infinity_count=infinity_count)
        if residual < best_residual:
            best_name, best_roots, best_residual = name, full, residual

    raise RootFindingError(
        f"no root set within relative residual {tol:.1e} ({best_name} was closest)",
        best_residual=best_residual,
    )


def extended_context(dps: int) -> mpmath.MPContext:
    """Private mpmath context; the precision of mpmath.mp is shared by all threads"""
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def find_roots_extended(
    coeffs: Sequence, nominal_degree: int, dps: Optional[int] = None
) -> RootSet:
    """
    Roots of a polynomial whose ascending coefficients are held at dps digits.

    Durand-Kerner iteration runs in mpmath, started from the double-precision
    Aberth roots; the result is rounded to complex128 only at the end.

    Raises:
        ZeroPolynomialError: If every coefficient vanishes
        RootFindingError: If the iteration stalls and the complex128 fallback
            misses the residual bound
    """
    settings = get_settings()
    dps = settings.extended_dps if dps is None else dps
    if len(coeffs) != nominal_degree + 1:
        raise DomainError(
            f"expected {nominal_degree + 1} coefficients, got {len(coeffs)}"
        )

    ctx = extended_context(dps)
    coeffs = [ctx.convert(c) for c in coeffs]
    scale = max(abs(c) for c in coeffs)
    if scale == 0:
        raise ZeroPolynomialError()
    negligible = scale * ctx.mpf(10) ** (10 - dps)

    top = max(k for k, c in enumerate(coeffs) if abs(c) > negligible)
    low = min(k for k, c in enumerate(coeffs) if c != 0)
    core = coeffs[low : top + 1]
    origin = [0j] * low
    if len(core) == 1:
        return RootSet(finite_roots=origin, infinity_count=nominal_degree - top)

    start, _ = _aberth(np.array([complex(c) for c in core]), settings.root_max_sweeps)
    if start is not None and len(set(start.tolist())) < len(start):
        start = None
    try:
        found, error = ctx.polyroots(
            core[::-1],
            maxsteps=settings.extended_max_steps,
            extraprec=4 * dps,
            error=True,
            roots_init=None if start is None else [ctx.mpc(z) for z in start],
        )
    except ctx.NoConvergence:
        # Exact repeated roots stall Durand-Kerner; double precision resolves them as well
        logger.warning(
            "extended-precision iteration stalled at degree %d; rounding to complex128",
            len(core) - 1,
        )
        rounded = ComplexPolynomial(
            coeffs=[complex(c) for c in coeffs], nominal_degree=nominal_degree
        )
        return find_roots(rounded)
    logger.debug("extended roots at %d digits, error estimate %s", dps, ctx.nstr(error, 3))
    finite = np.array(origin + [complex(z) for z in found], dtype=np.complex128)
    return RootSet(finite_roots=_sorted(finite), infinity_count=nominal_degree - top)


def poly_from_roots(roots: RootSet, nominal_degree: int) -> ComplexPolynomial:
    """Monic product of (z - r) over the finite roots, zero padded to nominal_degree"""
    if roots.size != nominal_degree:
        raise DomainError(
            f"root set has {roots.size} entries but nominal degree is {nominal_degree}"
        )
    if len(roots.finite_roots):
        coeffs = P.polyfromroots(roots.finite_roots).astype(np.complex128)
    else:
        coeffs = np.ones(1, dtype=np.complex128)
    padded = np.zeros(nominal_degree + 1, dtype=np.complex128)
    padded[: len(coeffs)] = coeffs
    return ComplexPolynomial(coeffs=padded, nominal_degree=nominal_degree)


def root_residuals(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Relative residuals |p(r)| / (max|c| · max(1, |r|)^deg)"""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    roots = np.asarray(roots, dtype=np.complex128)
    degree = len(coeffs) - 1
    scale = np.max(np.abs(coeffs))
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.abs(P.polyval(roots, coeffs))
        bound = scale * np.maximum(1.0, np.abs(roots)) ** degree
        residuals = values / bound
    return np.where(np.isfinite(residuals), residuals, np.inf)


def _aberth(core: np.ndarray, max_sweeps: int) -> Tuple[Optional[np.ndarray], bool]:
    degree = len(core) - 1
    monic = core / core[-1]
    derivative = P.polyder(monic)

    # Cauchy bound on root moduli
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(degree) / degree + START_PHASE))

    for _ in range(max_sweeps):
        with np.errstate(all="ignore"):
            ratio = P.polyval(z, monic) / P.polyval(z, derivative)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            repulsion = 1.0 / diff
            np.fill_diagonal(repulsion, 0.0)
            step = ratio / (1.0 - ratio * repulsion.sum(axis=1))
        if not np.all(np.isfinite(step)):
            return None, False
        z = z - step
        if np.all(np.abs(step) < 1e-14 * (1.0 + np.abs(z))):
            return z, True
    return z, False


def _sorted(roots: np.ndarray) -> np.ndarray:
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]

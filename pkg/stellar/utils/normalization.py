"""Normalization utilities for quantum numbers, state vectors and point sets."""

from __future__ import annotations

from fractions import Fraction
from numbers import Real
from typing import Any, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from stellar.errors import DomainError

ZERO_NORM = 1e-300


def twice(value: Real | Fraction | str) -> int:
    """Return 2·value as an int, rejecting anything that is not a half-integer."""
    doubled = 2 * Fraction(value) if isinstance(value, str) else 2 * value
    rounded = int(round(float(doubled)))
    if abs(float(doubled) - rounded) > 1e-9:
        raise DomainError(f"{value} is not a half-integer")
    return rounded


def half(two_x: int) -> Fraction:
    return Fraction(two_x, 2)


def format_half(two_x: int) -> str:
    return str(two_x // 2) if two_x % 2 == 0 else f"{two_x}/2"


def normalize_vector(amps: Any, what: str = "state") -> np.ndarray:
    vec = np.asarray(amps, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(vec)
    if not np.isfinite(norm) or norm < ZERO_NORM:
        raise DomainError(f"{what} has zero norm")
    return vec / norm


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Overlap magnitude |<a|b>| of two normalized vectors (phase-blind)."""
    return float(abs(np.vdot(a, b)))


def chordal_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise Euclidean distances between rows of two point arrays."""
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    return np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)


def multiset_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Largest distance between two equal-size point multisets under optimal pairing."""
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    if a.shape != b.shape:
        raise DomainError(f"multiset sizes differ: {len(a)} vs {len(b)}")
    if len(a) == 0:
        return 0.0
    cost = chordal_matrix(a, b)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def single_linkage(points: np.ndarray, threshold: float) -> list[list[int]]:
    """Group row indices whose chains of pairwise distances stay within threshold."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    n = len(points)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    distances = chordal_matrix(points, points)
    for i in range(n):
        for k in range(i + 1, n):
            if distances[i, k] <= threshold:
                parent[find(i)] = find(k)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def round_floats(value: Any, digits: int) -> Any:
    """Recursively round floats to a fixed number of significant digits."""
    if isinstance(value, float):
        if not np.isfinite(value):
            return value
        return float(f"{value:.{digits}g}") + 0.0
    if isinstance(value, dict):
        return {k: round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value


def complex_pairs(values: Sequence[complex]) -> list[list[float]]:
    return [[float(np.real(v)), float(np.imag(v))] for v in values]

"""Random sampling helpers for property checks"""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group


def haar_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    return unitary_group.rvs(dim, random_state=rng)


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    u = haar_unitary(rng, 2)
    return u / np.sqrt(np.linalg.det(u))


def random_state_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_spinor_vector(rng: np.random.Generator) -> np.ndarray:
    return random_state_vector(rng, 2)


def random_invertible(rng: np.random.Generator, max_condition: float = 100.0) -> np.ndarray:
    """Random complex 2×2 matrix with condition number at most max_condition."""
    u = haar_unitary(rng, 2)
    v = haar_unitary(rng, 2)
    smallest = rng.uniform(1.0 / max_condition, 1.0)
    scale = rng.uniform(0.5, 2.0)
    return scale * (u @ np.diag([1.0, smallest]) @ v)


def random_positive_hermitian(rng: np.random.Generator, max_condition: float = 100.0) -> np.ndarray:
    u = haar_unitary(rng, 2)
    eigs = np.array([1.0, rng.uniform(1.0 / max_condition, 1.0)])
    return u @ np.diag(eigs) @ u.conj().T

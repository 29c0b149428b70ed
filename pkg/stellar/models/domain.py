"""Pydantic value types for polynomials, spinors, spin states and Schur data"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from stellar.utils.normalization import format_half, half, normalize_vector

ARRAY_CONFIG = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


# ==================== Polynomials ====================


class ComplexPolynomial(BaseModel):
    """Coefficients in ascending degree order, padded to nominal_degree + 1"""

    model_config = ARRAY_CONFIG

    coeffs: np.ndarray
    nominal_degree: int = Field(..., ge=0)

    @field_validator("coeffs", mode="before")
    @classmethod
    def _as_array(cls, value):
        return _frozen(np.array(value, dtype=np.complex128).reshape(-1))

    @model_validator(mode="after")
    def _check_length(self) -> "ComplexPolynomial":
        if len(self.coeffs) != self.nominal_degree + 1:
            raise ValueError(
                f"expected {self.nominal_degree + 1} coefficients, got {len(self.coeffs)}"
            )
        return self

    def evaluate(self, z: complex | np.ndarray) -> complex | np.ndarray:
        return np.polynomial.polynomial.polyval(z, self.coeffs)


class RootSet(BaseModel):
    """Finite roots plus the number of roots at infinity"""

    model_config = ARRAY_CONFIG

    finite_roots: np.ndarray
    infinity_count: int = Field(0, ge=0)

    @field_validator("finite_roots", mode="before")
    @classmethod
    def _as_array(cls, value):
        return _frozen(np.array(value, dtype=np.complex128).reshape(-1))

    @property
    def size(self) -> int:
        return len(self.finite_roots) + self.infinity_count


# ==================== Sphere geometry ====================


class Spinor(BaseModel):
    """Normalized spin-½ state c0|0> + c1|1>"""

    model_config = ARRAY_CONFIG

    c0: complex
    c1: complex

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, dict):
            vec = normalize_vector([data.get("c0", 0), data.get("c1", 0)], "spinor")
            return {"c0": complex(vec[0]), "c1": complex(vec[1])}
        return data

    @classmethod
    def from_vector(cls, vec) -> "Spinor":
        vec = np.asarray(vec, dtype=np.complex128).reshape(2)
        return cls(c0=complex(vec[0]), c1=complex(vec[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=np.complex128)


class ExtendedComplex(BaseModel):
    """A point of the extended complex plane; value None is the point at infinity"""

    model_config = ARRAY_CONFIG

    value: Optional[complex] = None

    @classmethod
    def infinity(cls) -> "ExtendedComplex":
        return cls(value=None)

    @classmethod
    def finite(cls, z: complex) -> "ExtendedComplex":
        return cls(value=complex(z))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __repr__(self) -> str:
        return "ExtendedComplex(inf)" if self.is_infinite else f"ExtendedComplex({self.value})"


class BlochPoint(BaseModel):
    """Unit vector on the Bloch sphere"""

    model_config = ARRAY_CONFIG

    n: np.ndarray

    @field_validator("n", mode="before")
    @classmethod
    def _unit(cls, value):
        vec = np.array(value, dtype=float).reshape(3)
        norm = np.linalg.norm(vec)
        if norm < 1e-300:
            raise ValueError("Bloch vector has zero length")
        return _frozen(vec / norm)


class MobiusMap(BaseModel):
    """z -> (a z + b) / (c z + d)"""

    model_config = ARRAY_CONFIG

    a: complex
    b: complex
    c: complex
    d: complex

    @model_validator(mode="after")
    def _invertible(self) -> "MobiusMap":
        if abs(self.a * self.d - self.b * self.c) == 0:
            raise ValueError("Mobius map needs ad - bc != 0")
        return self

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)


class PolarFactors(BaseModel):
    """m = u @ r with u unitary and r Hermitian positive semidefinite"""

    model_config = ARRAY_CONFIG

    u: np.ndarray
    r: np.ndarray


# ==================== Spin states ====================


class SpinState(BaseModel):
    """Spin-J pure state, amplitudes indexed by m = J, J-1, ..., -J"""

    model_config = ARRAY_CONFIG

    two_j: int = Field(..., ge=0)
    amps: np.ndarray

    @field_validator("amps", mode="before")
    @classmethod
    def _normalize(cls, value):
        return _frozen(normalize_vector(value, "spin state"))

    @model_validator(mode="after")
    def _check_length(self) -> "SpinState":
        if len(self.amps) != self.two_j + 1:
            raise ValueError(f"spin {format_half(self.two_j)} needs {self.two_j + 1} amplitudes")
        return self

    @classmethod
    def from_amplitudes(cls, amps) -> "SpinState":
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        return cls(two_j=len(amps) - 1, amps=amps)

    @property
    def j(self) -> Fraction:
        return half(self.two_j)


class PointConstellation(BaseModel):
    """Majorana points of a state together with the roots they came from"""

    model_config = ARRAY_CONFIG

    points: np.ndarray
    source_roots: RootSet

    @field_validator("points", mode="before")
    @classmethod
    def _as_array(cls, value):
        return _frozen(np.array(value, dtype=float).reshape(-1, 3))

    @model_validator(mode="after")
    def _check_size(self) -> "PointConstellation":
        if len(self.points) != self.source_roots.size:
            raise ValueError("points and source roots differ in size")
        return self

    def bloch_points(self) -> List[BlochPoint]:
        return [BlochPoint(n=p) for p in self.points]


class DegeneracySignature(BaseModel):
    """Descending cluster sizes of a constellation"""

    model_config = ConfigDict(frozen=True)

    multiplicities: Tuple[int, ...]

    @field_validator("multiplicities", mode="before")
    @classmethod
    def _sorted(cls, value):
        values = tuple(sorted((int(v) for v in value), reverse=True))
        if any(v <= 0 for v in values):
            raise ValueError("multiplicities must be positive")
        return values

    @property
    def total(self) -> int:
        return sum(self.multiplicities)


# ==================== Multi-qubit states and Schur data ====================


class MultiQubitState(BaseModel):
    """N-qubit amplitudes; qubit 1 is the most significant bit"""

    model_config = ARRAY_CONFIG

    n_qubits: int = Field(..., ge=1)
    amps: np.ndarray

    @field_validator("amps", mode="before")
    @classmethod
    def _normalize(cls, value):
        return _frozen(normalize_vector(value, "qubit state"))

    @model_validator(mode="after")
    def _check_length(self) -> "MultiQubitState":
        if len(self.amps) != 2**self.n_qubits:
            raise ValueError(f"{self.n_qubits} qubits need {2**self.n_qubits} amplitudes")
        return self

    @classmethod
    def from_amplitudes(cls, amps) -> "MultiQubitState":
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        n_qubits = int(round(np.log2(len(amps)))) if len(amps) else 0
        return cls(n_qubits=max(n_qubits, 1), amps=amps)


class CouplingPath(BaseModel):
    """Sequence 2·j_1, ..., 2·j_N of intermediate total spins (a Bratteli walk)"""

    model_config = ConfigDict(frozen=True)

    two_js: Tuple[int, ...]

    @field_validator("two_js")
    @classmethod
    def _bratteli(cls, value):
        if not value or value[0] != 1:
            raise ValueError("coupling paths start at j = 1/2")
        for prev, cur in zip(value, value[1:]):
            if abs(cur - prev) != 1 or cur < 0:
                raise ValueError(f"invalid coupling step {prev}/2 -> {cur}/2")
        return tuple(value)

    @property
    def two_j(self) -> int:
        return self.two_js[-1]

    @property
    def js(self) -> Tuple[Fraction, ...]:
        return tuple(half(v) for v in self.two_js)

    def label(self) -> str:
        return "->".join(format_half(v) for v in self.two_js)


class SchurSector(BaseModel):
    """All coupling paths ending at one j; vectors[alpha] has columns m = j, ..., -j"""

    model_config = ARRAY_CONFIG

    two_j: int = Field(..., ge=0)
    paths: Tuple[CouplingPath, ...]
    vectors: np.ndarray

    @model_validator(mode="after")
    def _shape(self) -> "SchurSector":
        if self.vectors.ndim != 3 or self.vectors.shape[0] != len(self.paths):
            raise ValueError("one vector block per path is required")
        if self.vectors.shape[2] != self.two_j + 1:
            raise ValueError("blocks need 2j + 1 columns")
        self.vectors.setflags(write=False)
        return self

    @property
    def multiplicity(self) -> int:
        return len(self.paths)


class SchurBasis(BaseModel):
    """Orthonormal coupled basis of (C^2)^{⊗N}, sectors ordered by j descending"""

    model_config = ARRAY_CONFIG

    n_qubits: int = Field(..., ge=1)
    sectors: Tuple[SchurSector, ...]

    def sector(self, two_j: int) -> SchurSector:
        for sector in self.sectors:
            if sector.two_j == two_j:
                return sector
        raise KeyError(two_j)

    def block(self, path: CouplingPath) -> np.ndarray:
        sector = self.sector(path.two_j)
        return sector.vectors[sector.paths.index(path)]

    def matrix(self) -> np.ndarray:
        """Columns ordered by j descending, then path order, then m descending"""
        columns = [v for sector in self.sectors for v in sector.vectors]
        return np.concatenate(columns, axis=1)


class SchurBlock(BaseModel):
    """One (j, alpha) term xi * |rep_state> ⊗ |alpha>; rep_state None marks a zero block"""

    model_config = ARRAY_CONFIG

    two_j: int
    path: CouplingPath
    alpha: int = Field(..., ge=0)
    xi: complex
    rep_state: Optional[SpinState] = None

    @model_validator(mode="after")
    def _consistent(self) -> "SchurBlock":
        if self.path.two_j != self.two_j:
            raise ValueError("path terminates at a different j")
        if self.rep_state is not None and self.rep_state.two_j != self.two_j:
            raise ValueError("representation state has the wrong spin")
        return self

    def rep_amplitudes(self) -> np.ndarray:
        """Representation amplitudes (length 2j+1); zeros for a null block"""
        if self.rep_state is None:
            return np.zeros(self.two_j + 1, dtype=np.complex128)
        return np.asarray(self.rep_state.amps)


class SchurDecomposition(BaseModel):
    """Per (j, alpha) weights and representation states, in schur_basis order"""

    model_config = ARRAY_CONFIG

    n_qubits: int = Field(..., ge=1)
    blocks: Tuple[SchurBlock, ...]

    @model_validator(mode="after")
    def _unit_weight(self) -> "SchurDecomposition":
        weight = sum(abs(b.xi) ** 2 for b in self.blocks)
        if abs(weight - 1.0) > 1e-8:
            raise ValueError(f"sum of |xi|^2 is {weight}, expected 1")
        return self

    def multiplicity_state(self) -> Dict[int, np.ndarray]:
        """Per 2j, the vector (xi^alpha)_alpha in path order"""
        result: Dict[int, List[complex]] = {}
        for block in self.blocks:
            result.setdefault(block.two_j, []).append(block.xi)
        return {k: np.array(v, dtype=np.complex128) for k, v in result.items()}

    def sector(self, two_j: int) -> List[SchurBlock]:
        return [b for b in self.blocks if b.two_j == two_j]


# ==================== Logical qubits ====================


class LogicalQubit(BaseModel):
    """Logical amplitudes a0|0_L> + a1|1_L>"""

    model_config = ARRAY_CONFIG

    a0: complex
    a1: complex

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, dict):
            vec = normalize_vector([data.get("a0", 0), data.get("a1", 0)], "logical qubit")
            return {"a0": complex(vec[0]), "a1": complex(vec[1])}
        return data

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=np.complex128)


class LogicalOperator(BaseModel):
    """Physical 8×8 operator with its declared 2×2 action on the j = 1/2 multiplicity factor"""

    model_config = ARRAY_CONFIG

    label: str
    matrix: np.ndarray
    multiplicity_action: np.ndarray
    permutation_coefficients: Dict[Tuple[int, ...], complex] = Field(default_factory=dict)
    fit_residual: float = 0.0


class LogicalReadout(BaseModel):
    """Logical qubit read from the j = 1/2 multiplicity factor of three qubits"""

    model_config = ARRAY_CONFIG

    weight: float = Field(..., description="Norm squared of the j = 1/2 sector")
    density: np.ndarray = Field(..., description="Normalized multiplicity Gram matrix")
    bloch: np.ndarray
    purity: float
    shared: bool = Field(..., description="Both blocks carry the same representation state")
    ratio: Optional[complex] = Field(None, description="(xi1 / xi0) <psi0|psi1>, shared case only")

"""Pydantic models for input documents, output documents and reports"""

from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

SCHEMA_VERSION = 1
POINT_NORM_TOL = 1e-9


# ==================== Input documents ====================


class StateFile(BaseModel):
    """Spin-J or N-qubit state as read from disk"""

    v: int = SCHEMA_VERSION
    kind: Literal["spin", "qubits"]
    J: Optional[str] = Field(None, description="Half-integer spin such as '3/2' (kind=spin)")
    N: Optional[int] = Field(None, ge=1, description="Number of qubits (kind=qubits)")
    amps: List[Tuple[float, float]] = Field(..., description="Amplitudes as [re, im] pairs")

    @field_validator("J", mode="before")
    @classmethod
    def _spin_as_text(cls, value):
        if value is None or isinstance(value, str):
            return value
        return str(value)

    @model_validator(mode="after")
    def _kind_fields(self) -> "StateFile":
        if self.kind == "spin" and self.J is None:
            raise ValueError("kind 'spin' requires J")
        if self.kind == "qubits" and self.N is None:
            raise ValueError("kind 'qubits' requires N")
        return self

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([complex(re, im) for re, im in self.amps], dtype=np.complex128)


class MatrixFile(BaseModel):
    """2x2 complex matrix given as rows of [re, im] pairs"""

    rows: List[List[Tuple[float, float]]]

    @field_validator("rows")
    @classmethod
    def _two_by_two(cls, value):
        if len(value) != 2 or any(len(row) != 2 for row in value):
            raise ValueError("matrix must be 2x2")
        return value

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[complex(re, im) for re, im in row] for row in self.rows], dtype=np.complex128
        )


# ==================== Constellations ====================


class ConstellationGroup(BaseModel):
    """Points of one state on a sphere, keyed by its (j, alpha) label"""

    j: str
    alpha: Optional[int] = None
    points: List[Tuple[float, float, float]] = Field(default_factory=list)
    degeneracy: List[int] = Field(default_factory=list)
    amplitudes: Optional[List[Tuple[float, float]]] = Field(
        None, description="Raw amplitudes where no sphere picture is drawn"
    )
    no_sphere: bool = False

    @field_validator("points")
    @classmethod
    def _unit_points(cls, value):
        for point in value:
            if abs(float(np.linalg.norm(point)) - 1.0) > POINT_NORM_TOL:
                raise ValueError(f"point {point} is not on the unit sphere")
        return value


class Sphere(BaseModel):
    label: Literal["representation", "multiplicity"]
    groups: List[ConstellationGroup] = Field(default_factory=list)


class ConstellationFile(BaseModel):
    v: int = SCHEMA_VERSION
    spheres: List[Sphere] = Field(default_factory=list)


# ==================== Reports ====================


class BlockSummary(BaseModel):
    """One row of the |xi| table of a decomposition"""

    j: str
    alpha: int
    path: str
    xi: Tuple[float, float]
    xi_abs: float


class DecompositionReport(BaseModel):
    v: int = SCHEMA_VERSION
    n_qubits: int
    blocks: List[BlockSummary]
    reconstruction_residual: float
    constellation: ConstellationFile


class PointsReport(BaseModel):
    """Constellation of a spin state plus the polynomial diagnostics"""

    v: int = SCHEMA_VERSION
    j: str
    constellation: ConstellationFile
    root_residuals: Optional[List[float]] = None


class BlockStructureReport(BaseModel):
    """Outcome of conjugating a collective x permutation operator into the Schur basis"""

    n_qubits: int
    tolerance: float
    off_block_max: float = Field(..., description="Largest entry outside the (j, m) blocks")
    block_deviations: Dict[str, float] = Field(
        default_factory=dict, description="Per j, max deviation from the predicted block"
    )
    passed: bool


class PropertyResult(BaseModel):
    name: str
    max_deviation: float
    threshold: float
    passed: bool


class SuiteReport(BaseModel):
    """Result of one verification suite"""

    name: str
    passed: bool
    trials: int
    seed: int
    properties: List[PropertyResult] = Field(default_factory=list)


class VerificationReport(BaseModel):
    v: int = SCHEMA_VERSION
    passed: bool
    suites: List[SuiteReport]


class ImmunityReport(BaseModel):
    """Deviations of the multiplicity data under random collective unitaries"""

    trials: int
    seed: int
    xi_deviation: float = Field(..., description="Max change of any |xi_j^alpha|")
    logical_deviation: float = Field(..., description="Max change of the logical Bloch vector")
    ratio_deviation: Optional[float] = Field(
        None, description="Max change of the gauge-fixed ratio, shared representation only"
    )
    shared_representation: bool
    passed: bool


class DimensionRow(BaseModel):
    partition: Tuple[int, ...]
    dim_gl: int
    dim_s: int


class SpinMultiplicity(BaseModel):
    j: str
    multiplicity: int


class DimensionTable(BaseModel):
    v: int = SCHEMA_VERSION
    n: int
    d: int
    rows: List[DimensionRow]
    total: int = Field(..., description="Sum of dim_gl * dim_s; equals d^n")
    spin_view: Optional[List[SpinMultiplicity]] = None

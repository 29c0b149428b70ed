"""Schur–Weyl machinery for N qubits

The coupled basis is built by adding one spin-1/2 at a time with Condon–Shortley
Clebsch–Gordan coefficients. The new qubit is the least significant bit and
|0> carries m = +1/2. Multiplicity labels are coupling paths sorted
lexicographically in descending order.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, factorial, prod
from numbers import Real
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from stellar.config import get_settings
from stellar.errors import DomainError, InvalidPermutationError, ResourceLimitError
from stellar.models.domain import (
    CouplingPath,
    MultiQubitState,
    SchurBasis,
    SchurBlock,
    SchurDecomposition,
    SchurSector,
    SpinState,
)
from stellar.models.schemas import BlockStructureReport, DimensionRow
from stellar.services.majorana import sym_power
from stellar.utils.normalization import format_half, twice

logger = logging.getLogger(__name__)

ZERO_BLOCK = 1e-12

Permutation = Tuple[int, ...]
HalfInteger = Real | Fraction | str


# ==================== Clebsch–Gordan coefficients ====================


def cg_coefficient(
    j1: HalfInteger, m1: HalfInteger, j2: HalfInteger, m2: HalfInteger, J: HalfInteger, M: HalfInteger
) -> float:
    """
    <j1 m1; j2 m2 | J M> by the Racah formula in exact rational arithmetic.

    Returns 0 for any argument combination outside the coupling domain.
    """
    try:
        t = [twice(x) for x in (j1, m1, j2, m2, J, M)]
    except DomainError:
        return 0.0
    return _cg_twice(*t)


@lru_cache(maxsize=4096)
def _cg_twice(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> float:
    if min(tj1, tj2, tJ) < 0 or tm1 + tm2 != tM:
        return 0.0
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tJ, tM)):
        if abs(tm) > tj or (tj - tm) % 2:
            return 0.0
    if (tj1 + tj2 + tJ) % 2 or tJ < abs(tj1 - tj2) or tJ > tj1 + tj2:
        return 0.0

    # every quantity below is an integer once the triangle and parity checks pass
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tm1) // 2
    c = (tj2 + tm2) // 2
    d = (tJ - tj2 + tm1) // 2
    e = (tJ - tj1 - tm2) // 2
    f = factorial
    prefactor = Fraction(
        (tJ + 1)
        * f((tJ + tj1 - tj2) // 2)
        * f((tJ - tj1 + tj2) // 2)
        * f(a)
        * f((tJ + tM) // 2)
        * f((tJ - tM) // 2)
        * f(b)
        * f((tj1 + tm1) // 2)
        * f((tj2 - tm2) // 2)
        * f(c),
        f((tj1 + tj2 + tJ) // 2 + 1),
    )
    total = Fraction(0)
    for k in range(max(0, -d, -e), min(a, b, c) + 1):
        total += Fraction(
            (-1) ** k, f(k) * f(a - k) * f(b - k) * f(c - k) * f(d + k) * f(e + k)
        )
    if total == 0:
        return 0.0
    return float(np.sign(float(total))) * float(np.sqrt(float(prefactor * total * total)))


# ==================== Dimensions ====================


def multiplicity_dim(n: int, j: HalfInteger) -> int:
    """d_j = (2j+1) C(N, N/2 - j) / (j + N/2 + 1), evaluated in integers"""
    return _multiplicity_twice(n, twice(j))


def _multiplicity_twice(n: int, two_j: int) -> int:
    if n < 1:
        raise DomainError("N must be positive")
    if two_j < 0 or two_j > n or (n - two_j) % 2:
        raise DomainError(f"j = {format_half(two_j)} does not occur for N = {n}")
    numerator = 2 * (two_j + 1) * comb(n, (n - two_j) // 2)
    return numerator // (two_j + n + 2)


def spin_values(n: int) -> List[int]:
    """Allowed 2j for N qubits, descending"""
    return list(range(n, -1, -2))


def irrep_dimensions(n: int, d: int) -> List[DimensionRow]:
    """
    Irreps of U(d) x S_N appearing in (C^d)^{⊗N}.

    Args:
        n: Number of tensor factors
        d: Local dimension

    Returns:
        One row per partition of n into at most d parts, largest partition first,
        with the Weyl dimension of the U(d) irrep and the hook-length dimension of
        the S_N irrep
    """
    if n < 1 or d < 2:
        raise DomainError("need N >= 1 and d >= 2")
    rows = []
    for partition in _partitions(n, d):
        cells = [(r, c) for r, length in enumerate(partition) for c in range(length)]
        conjugate = [sum(1 for length in partition if length > c) for c in range(partition[0])]
        hooks = prod(
            (partition[r] - c - 1) + (conjugate[c] - r - 1) + 1 for r, c in cells
        )
        contents = prod(d + c - r for r, c in cells)
        rows.append(
            DimensionRow(partition=partition, dim_gl=contents // hooks, dim_s=factorial(n) // hooks)
        )
    return rows


def _partitions(n: int, max_parts: int, largest: Optional[int] = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


# ==================== Coupled basis ====================


def schur_basis(n: int) -> SchurBasis:
    """
    Orthonormal real basis |j, m, alpha> of N qubits, cached per N.

    Raises:
        ResourceLimitError: If N exceeds the configured nmax
    """
    if n < 1:
        raise DomainError("N must be positive")
    nmax = get_settings().nmax
    if n > nmax:
        raise ResourceLimitError(f"N = {n} exceeds nmax = {nmax}")
    return _build_basis(n)


@lru_cache(maxsize=None)
def _build_basis(n: int) -> SchurBasis:
    logger.debug("building coupled basis for %d qubits", n)
    up = np.array([[1.0], [0.0]])
    down = np.array([[0.0], [1.0]])

    level: Dict[Tuple[int, ...], np.ndarray] = {(1,): np.eye(2)}
    for _ in range(n - 1):
        following: Dict[Tuple[int, ...], np.ndarray] = {}
        for path, block in level.items():
            two_j = path[-1]
            for two_j_new in (two_j + 1, two_j - 1):
                if two_j_new < 0:
                    continue
                raise_up, raise_down = _coupling_tables(two_j, two_j_new)
                following[path + (two_j_new,)] = (
                    np.kron(block, up) @ raise_up + np.kron(block, down) @ raise_down
                )
        level = following

    ordered = sorted(level, reverse=True)
    sectors = []
    for two_j in spin_values(n):
        paths = [p for p in ordered if p[-1] == two_j]
        sectors.append(
            SchurSector(
                two_j=two_j,
                paths=tuple(CouplingPath(two_js=p) for p in paths),
                vectors=np.stack([level[p] for p in paths]),
            )
        )
    return SchurBasis(n_qubits=n, sectors=tuple(sectors))


def _coupling_tables(two_j: int, two_j_new: int) -> Tuple[np.ndarray, np.ndarray]:
    """CG tables <j m; 1/2 mu | j' m'> for mu = +1/2 and mu = -1/2, rows m, columns m'"""
    tables = np.zeros((2, two_j + 1, two_j_new + 1))
    for row in range(two_j + 1):
        tm = two_j - 2 * row
        for col in range(two_j_new + 1):
            tm_new = two_j_new - 2 * col
            tables[0, row, col] = _cg_twice(two_j, tm, 1, 1, two_j_new, tm_new)
            tables[1, row, col] = _cg_twice(two_j, tm, 1, -1, two_j_new, tm_new)
    return tables[0], tables[1]


def schur_matrix(n: int) -> np.ndarray:
    """Real orthogonal 2^N x 2^N transform whose columns are the coupled basis vectors"""
    return schur_basis(n).matrix()


# ==================== Decomposition ====================


def decompose(s: MultiQubitState) -> SchurDecomposition:
    """
    Split a state into (xi, representation state) per coupling path.

    The phase of each block is fixed by making its first significant amplitude
    real positive, scanning m = j, -j, j-1, -(j-1), ...; blocks of norm below
    1e-12 get xi = 0 and no representation state.
    """
    basis = schur_basis(s.n_qubits)
    amps = np.asarray(s.amps)
    blocks = []
    for sector in basis.sectors:
        for alpha, (path, vectors) in enumerate(zip(sector.paths, sector.vectors)):
            xi, rep = _split_phase(vectors.T @ amps, sector.two_j)
            blocks.append(
                SchurBlock(two_j=sector.two_j, path=path, alpha=alpha, xi=xi, rep_state=rep)
            )
    return SchurDecomposition(n_qubits=s.n_qubits, blocks=tuple(blocks))


def _split_phase(v: np.ndarray, two_j: int) -> Tuple[complex, Optional[SpinState]]:
    norm = float(np.linalg.norm(v))
    if norm < ZERO_BLOCK:
        return 0j, None
    for index in _phase_scan(two_j):
        if abs(v[index]) > ZERO_BLOCK * norm:
            phase = v[index] / abs(v[index])
            break
    return complex(norm * phase), SpinState(two_j=two_j, amps=v / phase)


def _phase_scan(two_j: int) -> List[int]:
    order: List[int] = []
    for k in range(two_j // 2 + 1):
        for index in (k, two_j - k):
            if index not in order:
                order.append(index)
    return order


def reconstruct(d: SchurDecomposition) -> MultiQubitState:
    basis = schur_basis(d.n_qubits)
    amps = np.zeros(2**d.n_qubits, dtype=np.complex128)
    for block in d.blocks:
        if block.rep_state is None:
            continue
        amps += block.xi * (basis.block(block.path) @ block.rep_amplitudes())
    return MultiQubitState(n_qubits=d.n_qubits, amps=amps)


def multiplicity_density(d: SchurDecomposition, j: HalfInteger) -> np.ndarray:
    """G[alpha, alpha'] = xi^alpha conj(xi^alpha') <psi^alpha'|psi^alpha> over the j sector"""
    blocks = d.sector(twice(j))
    if not blocks:
        raise DomainError(f"no sector j = {j} for N = {d.n_qubits}")
    weighted = np.array([b.xi * b.rep_amplitudes() for b in blocks])
    return weighted @ weighted.conj().T


# ==================== Operators ====================


class TensorOperator:
    """Operator on (C^2)^{⊗N} applied as a tensor map"""

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise DomainError("N must be positive")
        self.n_qubits = n_qubits

    def apply(self, amps: np.ndarray) -> np.ndarray:
        """Act on a vector of length 2^N or on the columns of a 2^N x k array"""
        amps = np.asarray(amps)
        if amps.shape[0] != 2**self.n_qubits:
            raise DomainError(f"expected leading dimension {2 ** self.n_qubits}")
        tensor = amps.reshape([2] * self.n_qubits + [-1])
        return self._act(tensor).reshape(amps.shape)

    def _act(self, tensor: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        self._check_dense()
        return self.apply(np.eye(2**self.n_qubits, dtype=np.complex128))

    def _check_dense(self) -> None:
        dense_nmax = get_settings().dense_nmax
        if self.n_qubits > dense_nmax:
            raise ResourceLimitError(
                f"dense operators are limited to {dense_nmax} qubits, got {self.n_qubits}"
            )


class PermutationOperator(TensorOperator):
    """Moves the tensor factor in slot i to slot s(i), so S(s1) S(s2) = S(s1 ∘ s2)"""

    def __init__(self, s: Sequence[int], n_qubits: int):
        super().__init__(n_qubits)
        self.permutation = validate_permutation(s, n_qubits)
        inverse = [0] * n_qubits
        for i, target in enumerate(self.permutation):
            inverse[target - 1] = i
        self._axes = inverse + [n_qubits]

    def _act(self, tensor: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(tensor.transpose(self._axes))


class CollectiveOperator(TensorOperator):
    """m^{⊗N}"""

    def __init__(self, m: np.ndarray, n_qubits: int):
        super().__init__(n_qubits)
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        self.m = m

    def _act(self, tensor: np.ndarray) -> np.ndarray:
        tensor = tensor.astype(np.complex128)
        for axis in range(self.n_qubits):
            tensor = np.moveaxis(np.tensordot(self.m, tensor, axes=([1], [axis])), 0, axis)
        return tensor

    def to_dense(self) -> np.ndarray:
        self._check_dense()
        return reduce(np.kron, [self.m] * self.n_qubits)


def validate_permutation(s: Sequence[int], n: int) -> Permutation:
    """Check a 1-based one-line permutation of {1..N}"""
    try:
        values = tuple(int(v) for v in s)
    except (TypeError, ValueError) as exc:
        raise InvalidPermutationError(f"permutation entries must be integers: {s}") from exc
    if len(values) != n or sorted(values) != list(range(1, n + 1)):
        raise InvalidPermutationError(f"{list(values)} is not a permutation of 1..{n}")
    return values


def compose(s1: Sequence[int], s2: Sequence[int]) -> Permutation:
    """(s1 ∘ s2)(i) = s1(s2(i))"""
    return tuple(s1[v - 1] for v in s2)


def permutation_op(s: Sequence[int], n: int) -> PermutationOperator:
    return PermutationOperator(s, n)


def collective_op(m: np.ndarray, n: int) -> CollectiveOperator:
    return CollectiveOperator(m, n)


def apply_permutation(s: MultiQubitState, perm: Sequence[int]) -> MultiQubitState:
    return MultiQubitState(n_qubits=s.n_qubits, amps=permutation_op(perm, s.n_qubits).apply(s.amps))


def apply_collective(s: MultiQubitState, m: np.ndarray) -> MultiQubitState:
    return MultiQubitState(n_qubits=s.n_qubits, amps=collective_op(m, s.n_qubits).apply(s.amps))


# ==================== Symmetric states ====================


def symmetric_spin_state(s: MultiQubitState, tol: float = 1e-8) -> SpinState:
    """
    Read a permutation-symmetric N-qubit state as a spin-N/2 state.

    Raises:
        DomainError: If some amplitude changes under an adjacent swap by more than tol
    """
    n = s.n_qubits
    amps = np.asarray(s.amps)
    for k in range(1, n):
        swap = list(range(1, n + 1))
        swap[k - 1], swap[k] = k + 1, k
        difference = np.abs(permutation_op(swap, n).apply(amps) - amps)
        worst = int(np.argmax(difference))
        if difference[worst] > tol:
            raise DomainError(
                f"state is not symmetric: component |{worst:0{n}b}> changes by "
                f"{difference[worst]:.2e} when qubits {k} and {k + 1} are swapped"
            )
    weights = np.array([bin(index).count("1") for index in range(2**n)])
    spin = np.array(
        [amps[weights == k].sum() / np.sqrt(comb(n, k)) for k in range(n + 1)],
        dtype=np.complex128,
    )
    return SpinState(two_j=n, amps=spin)


def dicke_embedding(s: SpinState) -> MultiQubitState:
    """Spin-J state as a symmetric 2J-qubit state"""
    if s.two_j < 1:
        raise DomainError("spin 0 has no qubit embedding")
    n = s.two_j
    weights = np.array([bin(index).count("1") for index in range(2**n)])
    roots = np.sqrt(np.array([comb(n, k) for k in range(n + 1)], dtype=float))
    return MultiQubitState(n_qubits=n, amps=np.asarray(s.amps)[weights] / roots[weights])


# ==================== Block structure ====================


def perm_irrep_matrix(
    s: Sequence[int], j: HalfInteger, n: int, m: Optional[HalfInteger] = None
) -> np.ndarray:
    """
    Action of S(s) on the multiplicity space of spin j, read off at magnetization m.

    Args:
        s: 1-based one-line permutation
        j: Total spin of the sector
        n: Number of qubits
        m: Magnetization slice; defaults to m = j

    Returns:
        Real d_j x d_j matrix with entries <j, m, alpha|S(s)|j, m, alpha'>
    """
    two_j = twice(j)
    _multiplicity_twice(n, two_j)
    two_m = two_j if m is None else twice(m)
    if abs(two_m) > two_j or (two_j - two_m) % 2:
        raise DomainError(f"m = {format_half(two_m)} is not a magnetization of j = {format_half(two_j)}")
    sector = schur_basis(n).sector(two_j)
    columns = sector.vectors[:, :, (two_j - two_m) // 2].T
    moved = permutation_op(s, n).apply(columns)
    return columns.T @ moved.real


def verify_block_structure(
    m: np.ndarray, s: Sequence[int], n: int, tol: float = 1e-10
) -> BlockStructureReport:
    """
    Conjugate collective_op(m) · permutation_op(s) into the coupled basis and
    compare each j block with det(m)^{(N-2j)/2} sym_power(m, 2j) ⊗ perm_irrep_matrix(s, j).
    """
    dense_nmax = get_settings().dense_nmax
    if n > dense_nmax:
        raise ResourceLimitError(f"block check is limited to {dense_nmax} qubits")
    m = np.asarray(m, dtype=np.complex128)
    basis = schur_basis(n)
    q = basis.matrix()
    image = collective_op(m, n).apply(permutation_op(s, n).apply(q.astype(np.complex128)))
    conjugated = q.T @ image

    residual = conjugated.copy()
    deviations: Dict[str, float] = {}
    det = np.linalg.det(m)
    offset = 0
    for sector in basis.sectors:
        size = sector.multiplicity * (sector.two_j + 1)
        window = slice(offset, offset + size)
        predicted = np.kron(
            perm_irrep_matrix(s, Fraction(sector.two_j, 2), n),
            det ** ((n - sector.two_j) // 2) * sym_power(m, sector.two_j),
        )
        deviations[format_half(sector.two_j)] = float(
            np.max(np.abs(conjugated[window, window] - predicted))
        )
        residual[window, window] = 0
        offset += size

    off_block = float(np.max(np.abs(residual)))
    passed = bool(off_block <= tol and all(v <= tol for v in deviations.values()))
    if not passed:
        logger.error("block structure check failed for N=%d (off-block %.3e)", n, off_block)
    return BlockStructureReport(
        n_qubits=n,
        tolerance=tol,
        off_block_max=off_block,
        block_deviations=deviations,
        passed=passed,
    )

"""Tests for the three-qubit logical qubit"""

import numpy as np
import pytest

from stellar.errors import DomainError
from stellar.models.domain import LogicalQubit, MultiQubitState, SpinState, Spinor
from stellar.services.bloch import spinor_to_bloch
from stellar.services.dfs import (
    apply_logical,
    collective_noise_immunity,
    decode_logical,
    encode_logical,
    euler_matrix,
    logical_unitary,
    normalized_logicals,
    xy_logical,
    z_logical,
    z_scale,
)
from stellar.services.schur import collective_op, schur_basis
from stellar.utils.random import haar_su2, random_spinor_vector, random_state_vector


@pytest.fixture
def logical_qubit(rng) -> LogicalQubit:
    a0, a1 = random_spinor_vector(rng)
    return LogicalQubit(a0=a0, a1=a1)


@pytest.fixture
def representation(rng) -> SpinState:
    return SpinState(two_j=1, amps=random_spinor_vector(rng))


def doublet_projector() -> np.ndarray:
    return sum(v @ v.T for v in schur_basis(3).sector(1).vectors)


class TestLogicalOperators:
    """Tests for the logical Pauli operators"""

    def test_z_logical_is_diagonal(self):
        """Test that Z_L acts as diag(-1, 1) on the two coupling paths"""
        assert np.allclose(z_logical().multiplicity_action, np.diag([-1.0, 1.0]))
        assert z_scale() == pytest.approx(1.0)

    def test_vanish_on_symmetric_sector(self):
        """Test that every logical operator is zero on j = 3/2"""
        quartet = schur_basis(3).sector(3).vectors[0]
        for op in normalized_logicals():
            assert np.allclose(op.matrix @ quartet, 0.0, atol=1e-12)

    def test_squares_are_the_doublet_projector(self):
        """Test that X~, Y~ and Z~ square to the j = 1/2 projector"""
        projector = doublet_projector()
        for op in normalized_logicals():
            assert np.allclose(op.matrix @ op.matrix, projector, atol=1e-12)

    def test_pauli_algebra(self):
        """Test X~ Y~ = i Z~ on the full space"""
        x, y, z = normalized_logicals()

        assert np.allclose(x.matrix @ y.matrix, 1j * z.matrix, atol=1e-12)
        assert np.allclose(x.multiplicity_action @ y.multiplicity_action, 1j * z.multiplicity_action)

    def test_commute_with_collective_unitaries(self, rng):
        """Test that logical operators commute with u^{⊗3}"""
        u = collective_op(haar_su2(rng), 3).to_dense()
        for op in normalized_logicals():
            assert np.allclose(op.matrix @ u, u @ op.matrix, atol=1e-12)

    def test_permutation_expansions(self):
        """Test the group algebra fits of X_L and Y_L"""
        x, y = xy_logical()

        assert x.fit_residual < 1e-10
        assert y.fit_residual < 1e-10
        assert max(abs(c.imag) for c in x.permutation_coefficients.values()) < 1e-10
        assert max(abs(c.real) for c in y.permutation_coefficients.values()) < 1e-10
        assert len(y.permutation_coefficients) == 6


class TestLogicalRotations:
    """Tests for Euler rotations of the logical qubit"""

    def test_identity(self):
        """Test that zero angles give the identity"""
        assert np.allclose(logical_unitary(0.0, 0.0, 0.0), np.eye(8))

    def test_euler_matrix_is_unitary(self):
        """Test unitarity of the multiplicity action"""
        e = euler_matrix(0.3, 1.1, -0.7)

        assert np.allclose(e.conj().T @ e, np.eye(2))

    def test_rotation_matches_prediction(self, logical_qubit, representation):
        """Test that the physical rotation acts as the Euler matrix on the logical amplitudes"""
        angles = (0.4, -1.2, 2.5)
        state = encode_logical(logical_qubit, representation, representation)

        rotated = apply_logical(state, *angles)

        a0, a1 = euler_matrix(*angles) @ logical_qubit.vector
        expected = encode_logical(LogicalQubit(a0=a0, a1=a1), representation, representation)
        assert np.allclose(rotated.amps, expected.amps, atol=1e-12)

    def test_half_turn_is_a_global_phase(self, logical_qubit, representation):
        """Test that alpha = pi leaves the logical Bloch vector in place"""
        state = encode_logical(logical_qubit, representation, representation)

        rotated = apply_logical(state, np.pi, 0.0, 0.0)

        assert np.allclose(rotated.amps, -np.asarray(state.amps), atol=1e-12)
        assert np.allclose(decode_logical(rotated).bloch, decode_logical(state).bloch, atol=1e-12)

    def test_requires_three_qubits(self):
        """Test that other qubit counts are rejected"""
        state = MultiQubitState(n_qubits=2, amps=[1, 0, 0, 0])

        with pytest.raises(DomainError):
            apply_logical(state, 0.1, 0.2, 0.3)


class TestReadout:
    """Tests for encode_logical and decode_logical"""

    def test_shared_representation(self, logical_qubit, representation):
        """Test that an encoded qubit reads back exactly"""
        readout = decode_logical(encode_logical(logical_qubit, representation, representation))

        expected = spinor_to_bloch(Spinor(c0=logical_qubit.a0, c1=logical_qubit.a1)).n
        assert readout.shared is True
        assert readout.weight == pytest.approx(1.0)
        assert readout.purity == pytest.approx(1.0)
        assert np.allclose(readout.bloch, expected, atol=1e-12)
        assert readout.ratio == pytest.approx(logical_qubit.a1 / logical_qubit.a0)

    def test_logical_example_is_maximally_mixed(self, logical_state):
        """Test the readout of orthogonal representation states"""
        readout = decode_logical(logical_state)

        assert readout.shared is False
        assert readout.ratio is None
        assert readout.purity == pytest.approx(0.5)
        assert np.allclose(readout.bloch, 0.0, atol=1e-12)

    def test_no_doublet_weight(self):
        """Test that a fully symmetric state has no logical qubit"""
        state = MultiQubitState(n_qubits=3, amps=np.eye(8)[0])

        with pytest.raises(DomainError):
            decode_logical(state)

    def test_representation_must_be_spin_half(self, logical_qubit):
        """Test that encode_logical needs spin-1/2 representation states"""
        spin_one = SpinState(two_j=2, amps=[1, 0, 0])

        with pytest.raises(DomainError):
            encode_logical(logical_qubit, spin_one, spin_one)


class TestCollectiveNoise:
    """Tests for collective_noise_immunity"""

    def test_logical_example(self, logical_state):
        """Test that random collective unitaries leave the multiplicity data unchanged"""
        report = collective_noise_immunity(logical_state, trials=8, seed=7, workers=2)

        assert report.passed
        assert report.xi_deviation <= 1e-10
        assert report.ratio_deviation is None

    def test_encoded_qubit(self, logical_qubit, representation):
        """Test that the gauge-fixed ratio survives collective noise"""
        state = encode_logical(logical_qubit, representation, representation)

        report = collective_noise_immunity(state, trials=8, seed=11, workers=2)

        assert report.passed
        assert report.shared_representation
        assert report.ratio_deviation <= 1e-9

    def test_general_state(self, rng):
        """Test |xi| invariance for a random four-qubit state"""
        state = MultiQubitState(n_qubits=4, amps=random_state_vector(rng, 16))

        report = collective_noise_immunity(state, trials=5, seed=3, workers=2)

        assert report.passed
        assert report.logical_deviation == 0.0

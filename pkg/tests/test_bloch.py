"""Tests for sphere conversions and GL(2) maps"""

import numpy as np
import pytest

from stellar.errors import DomainError, NonUnitaryError, SingularMatrixError
from stellar.models.domain import BlochPoint, ExtendedComplex, MobiusMap, RootSet, Spinor
from stellar.services.bloch import (
    apply_mobius,
    bloch_to_spinor,
    bloch_to_z,
    chordal_distance,
    mobius_from_gl2,
    mobius_through_points,
    polar_decompose,
    spinor_to_bloch,
    spinor_to_z,
    su2_to_so3,
    transform_roots,
    z_to_bloch,
    z_to_spinor,
)
from stellar.utils.random import (
    haar_su2,
    haar_unitary,
    random_invertible,
    random_positive_hermitian,
    random_spinor_vector,
)

INF = ExtendedComplex.infinity()


def finite(z: complex) -> ExtendedComplex:
    return ExtendedComplex.finite(z)


class TestConversions:
    """Tests for spinor, coordinate and Bloch conversions"""

    def test_poles(self):
        """Test that |0> sits at infinity and the north pole"""
        assert spinor_to_z(Spinor(c0=1.0, c1=0.0)).is_infinite
        assert np.allclose(z_to_bloch(INF).n, [0.0, 0.0, 1.0])
        assert np.allclose(z_to_bloch(finite(0.0)).n, [0.0, 0.0, -1.0])

    def test_equator_points(self):
        """Test the images of 1 and -i"""
        assert np.allclose(z_to_bloch(finite(1.0)).n, [1.0, 0.0, 0.0])
        assert np.allclose(z_to_bloch(finite(-1j)).n, [0.0, 1.0, 0.0])

    def test_north_pole_inverse(self):
        """Test that the north pole maps back to infinity"""
        assert bloch_to_z(BlochPoint(n=[0.0, 0.0, 1.0])).is_infinite

    def test_round_trip_near_north_pole(self):
        """Test accuracy of the inverse map close to the north pole"""
        point = z_to_bloch(finite(1e7 * np.exp(0.3j)))

        z = bloch_to_z(point)

        assert abs(z.value - 1e7 * np.exp(0.3j)) / 1e7 < 1e-9

    def test_spinor_and_coordinate_paths_agree(self, rng):
        """Test that both routes from a spinor to the sphere coincide"""
        spinors = [Spinor(c0=1.0, c1=0.0), Spinor(c0=0.0, c1=1.0)]
        spinors += [Spinor.from_vector(random_spinor_vector(rng)) for _ in range(98)]
        for spinor in spinors:
            direct = spinor_to_bloch(spinor).n
            via_z = z_to_bloch(spinor_to_z(spinor)).n
            assert np.allclose(direct, via_z, atol=1e-12)

    def test_bloch_spinor_round_trip(self, rng):
        """Test that bloch_to_spinor inverts spinor_to_bloch"""
        for _ in range(20):
            point = BlochPoint(n=rng.normal(size=3))
            assert np.allclose(spinor_to_bloch(bloch_to_spinor(point)).n, point.n, atol=1e-12)

    def test_z_to_spinor_gauge(self):
        """Test that z_to_spinor fixes c1 real nonnegative and inverts spinor_to_z"""
        spinor = z_to_spinor(finite(2 - 1j))

        assert spinor.c1.imag == 0.0 and spinor.c1.real > 0
        assert spinor_to_z(spinor).value == pytest.approx(2 - 1j)
        assert z_to_spinor(INF).vector.tolist() == [1, 0]

    def test_chordal_distance_between_poles(self):
        """Test the diameter of the sphere"""
        assert chordal_distance(finite(0.0), INF) == pytest.approx(2.0)


class TestGroupMaps:
    """Tests for the SU(2) to SO(3) map and polar factors"""

    def test_rotation_is_orthogonal(self, rng):
        """Test that su2_to_so3 yields proper rotations"""
        rotation = su2_to_so3(haar_su2(rng))

        assert np.allclose(rotation @ rotation.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(rotation) == pytest.approx(1.0)

    def test_rotation_moves_points(self, rng):
        """Test that R(u) n(s) equals n(u s)"""
        u = haar_su2(rng)
        spinor = Spinor.from_vector(random_spinor_vector(rng))

        rotated = su2_to_so3(u) @ spinor_to_bloch(spinor).n
        moved = spinor_to_bloch(Spinor.from_vector(u @ spinor.vector)).n

        assert np.allclose(rotated, moved, atol=1e-12)

    def test_non_unitary_rejected(self):
        """Test that su2_to_so3 refuses non-unitary input"""
        with pytest.raises(NonUnitaryError):
            su2_to_so3(np.diag([2.0, 0.5]))

    def test_homomorphism(self, rng):
        """Test that R(u1 u2) = R(u1) R(u2)"""
        for _ in range(20):
            a, b = haar_su2(rng), haar_su2(rng)
            assert np.allclose(su2_to_so3(a @ b), su2_to_so3(a) @ su2_to_so3(b), atol=1e-9)

    def test_phase_rotation_about_z(self):
        """Test that exp(i phi sigma_z) turns the sphere by -2 phi about z"""
        phi = 0.3
        u = np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
        c, s = np.cos(2 * phi), np.sin(2 * phi)

        expected = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
        assert np.allclose(su2_to_so3(u), expected, atol=1e-12)

    def test_polar_factors(self, rng):
        """Test m = u r with u unitary and r positive"""
        m = random_invertible(rng)

        factors = polar_decompose(m)

        assert np.allclose(factors.u @ factors.r, m, atol=1e-12)
        assert np.allclose(factors.u.conj().T @ factors.u, np.eye(2), atol=1e-12)
        assert np.allclose(factors.r, factors.r.conj().T)
        assert np.all(np.linalg.eigvalsh(factors.r) > 0)

    def test_polar_factors_are_unique(self, rng):
        """Test that a planted unitary and positive factor are recovered"""
        u = haar_unitary(rng, 2)
        r = random_positive_hermitian(rng, 20.0)

        factors = polar_decompose(u @ r)

        assert np.allclose(factors.u, u, atol=1e-9)
        assert np.allclose(factors.r, r, atol=1e-9)

    def test_singular_matrix(self):
        """Test that singular matrices are rejected"""
        with pytest.raises(SingularMatrixError):
            polar_decompose(np.array([[1.0, 2.0], [2.0, 4.0]]))


class TestMobius:
    """Tests for Möbius maps"""

    def test_infinity_and_pole(self):
        """Test the images of infinity and of -d/c"""
        f = MobiusMap(a=1.0, b=2.0, c=1.0, d=-1.0)

        assert apply_mobius(f, INF).value == pytest.approx(1.0)
        assert apply_mobius(f, finite(1.0)).is_infinite

    def test_transform_roots_moves_infinity(self):
        """Test that roots at infinity are carried through the map"""
        f = MobiusMap(a=0.0, b=1.0, c=1.0, d=0.0)

        image = transform_roots(f, RootSet(finite_roots=[2.0], infinity_count=1))

        assert image.infinity_count == 0
        assert np.allclose(sorted(image.finite_roots, key=abs), [0.0, 0.5])

    def test_through_three_points(self):
        """Test that the map sends each source point to its target"""
        src = [finite(0.0), finite(1.0), INF]
        dst = [finite(2j), INF, finite(-1.0)]

        f = mobius_through_points(src, dst)

        assert abs(apply_mobius(f, src[0]).value - 2j) < 1e-12
        assert chordal_distance(apply_mobius(f, src[1]), INF) < 1e-9
        assert abs(apply_mobius(f, src[2]).value + 1.0) < 1e-12

    def test_points_must_be_distinct(self):
        """Test that repeated anchors are rejected"""
        with pytest.raises(DomainError):
            mobius_through_points([finite(1.0), finite(1.0), INF], [finite(0.0), finite(1.0), INF])

    def test_composition_matches_matrix_product(self, rng):
        """Test that the map of a @ b is the map of a after the map of b"""
        a, b = random_invertible(rng, 10.0), random_invertible(rng, 10.0)
        fa, fb, fab = mobius_from_gl2(a), mobius_from_gl2(b), mobius_from_gl2(a @ b)

        for z in [INF, finite(0.0)] + [finite(complex(*rng.normal(size=2))) for _ in range(20)]:
            composed = apply_mobius(fa, apply_mobius(fb, z))
            assert chordal_distance(composed, apply_mobius(fab, z)) < 1e-9

    def test_spinor_action_matches_map(self, rng):
        """Test that z(m s) is the Mobius image of z(s)"""
        m = random_invertible(rng, 10.0)
        f = mobius_from_gl2(m)

        for _ in range(100):
            spinor = Spinor.from_vector(random_spinor_vector(rng))
            moved = Spinor.from_vector(m @ spinor.vector)
            image = apply_mobius(f, spinor_to_z(spinor))
            assert chordal_distance(image, spinor_to_z(moved)) < 1e-10

import numpy as np
import pytest

from paircompton import models, quantum
from paircompton.kinematics import TWO_PI, big_f, big_g
from paircompton.quantum import (
    MINUS,
    PLUS,
    averaging_identity,
    decomposition_check,
    expectation_pair,
    expectation_single,
    pol_vector,
    rotated_singlet,
    scatter_matrix,
    singlet,
)


class TestSinglet:
    def test_components_and_norm(self):
        psi = singlet()
        np.testing.assert_allclose(psi, [0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0], atol=1e-16)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-15)

    def test_antisymmetric_under_swap(self):
        psi = singlet()
        swapped = psi.reshape(2, 2).T.ravel()
        np.testing.assert_allclose(swapped, -psi, atol=1e-16)

    def test_no_xx_overlap(self):
        assert singlet()[0] == 0.0
        assert singlet() @ np.array([1.0, 0.0, 0.0, 0.0]) == 0.0


class TestRotatedSinglet:
    @pytest.mark.parametrize("big_phi", [0.0, np.pi / 3, 1.234])
    def test_reference_angles(self, big_phi):
        np.testing.assert_allclose(rotated_singlet(big_phi), singlet(), atol=1e-14)

    def test_hundred_random_angles(self):
        rng = np.random.default_rng(51)
        target = singlet()
        for big_phi in rng.uniform(0, TWO_PI, 100):
            assert np.abs(rotated_singlet(big_phi) - target).max() < 1e-14


class TestScatterMatrix:
    def test_forward_is_twice_identity(self):
        for phi in (0.0, 1.0, 5.0):
            np.testing.assert_allclose(scatter_matrix(1.0, phi), 2.0 * np.eye(2), atol=1e-15)

    def test_entries(self):
        rng = np.random.default_rng(52)
        for _ in range(50):
            chi = rng.uniform(-1, 1)
            phi = rng.uniform(0, TWO_PI)
            s = scatter_matrix(chi, phi)
            f, g = big_f(chi), big_g(chi)
            assert s[0, 0] == pytest.approx(f - g * np.cos(2 * phi), rel=1e-14)
            assert s[1, 1] == pytest.approx(f + g * np.cos(2 * phi), rel=1e-14)
            assert s[0, 1] == pytest.approx(-g * np.sin(2 * phi), rel=1e-13, abs=1e-15)
            assert s[0, 1] == s[1, 0]

    def test_eigenvalues_f_plus_minus_g(self):
        chi, phi = 0.37, 2.1
        eig = np.sort(np.linalg.eigvalsh(scatter_matrix(chi, phi)))
        f, g = big_f(chi), big_g(chi)
        np.testing.assert_allclose(eig, [f - g, f + g], rtol=1e-12)

    def test_positive_semidefinite_on_grid(self):
        for chi in np.linspace(-1, 1, 41):
            for phi in np.linspace(0, TWO_PI, 16, endpoint=False):
                assert np.linalg.eigvalsh(scatter_matrix(chi, phi)).min() >= -1e-13


class TestExpectationSingle:
    def test_reference_point(self):
        # chi = 0, aligned azimuth: F - G = 3/8 - 1/4 = 1/8
        assert expectation_single(pol_vector(0.0), 0.0, 0.0) == pytest.approx(1 / 8, abs=1e-15)

    def test_relative_azimuth_zero(self):
        chi = 0.42
        val = expectation_single(pol_vector(np.pi / 4), chi, np.pi / 4)
        assert val == pytest.approx(big_f(chi) - big_g(chi), rel=1e-13)

    def test_matches_kn_bracket(self):
        rng = np.random.default_rng(53)
        for _ in range(1000):
            chi = rng.uniform(-1, 1)
            varphi = rng.uniform(0, TWO_PI)
            pol_angle = rng.uniform(0, TWO_PI)
            got = expectation_single(pol_vector(pol_angle), chi, varphi)
            want = float(models.kn_bracket(chi, varphi - pol_angle))
            assert got == pytest.approx(want, abs=1e-12)

    def test_uniform_polarization_average_is_f(self):
        # averaging over the polarization loses all azimuthal modulation
        chi, varphi = 0.3, 1.7
        angles = np.arange(64) * (TWO_PI / 64)
        mean = np.mean([expectation_single(pol_vector(a), chi, varphi) for a in angles])
        assert mean == pytest.approx(big_f(chi), abs=1e-12)

    def test_non_unit_polarization_rejected(self):
        with pytest.raises(ValueError):
            expectation_single(np.array([1.0, 1.0]), 0.0, 0.0)


class TestExpectationPair:
    def test_both_forward(self):
        assert expectation_pair(1.0, 0.3, 1.0, 2.2) == pytest.approx(4.0, abs=1e-14)

    def test_quarter_turn_delta(self):
        chi1, chi2 = 0.6, -0.4
        v1 = 0.9
        val = expectation_pair(chi1, v1, chi2, v1 + np.pi / 4)
        assert val == pytest.approx(big_f(chi1) * big_f(chi2), rel=1e-13)

    def test_matches_pw_bracket(self):
        rng = np.random.default_rng(54)
        for _ in range(1000):
            c1, c2 = rng.uniform(-1, 1, 2)
            v1, v2 = rng.uniform(0, TWO_PI, 2)
            got = expectation_pair(c1, v1, c2, v2)
            want = float(models.pw_bracket(c1, v1, c2, v2))
            assert got == pytest.approx(want, abs=1e-12)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(55)
        c1, c2 = 0.2, -0.7
        v1, v2 = 1.1, 4.0
        base = expectation_pair(c1, v1, c2, v2)
        for delta in rng.uniform(0, TWO_PI, 50):
            assert expectation_pair(c1, v1 + delta, c2, v2 + delta) == pytest.approx(
                base, abs=1e-12
            )


class TestDecomposition:
    def test_both_signs_exact(self):
        errors = decomposition_check()
        assert errors[PLUS] < 1e-10
        assert errors[MINUS] < 1e-10

    def test_node_count_insensitive(self):
        # the integrand is a trigonometric polynomial: exact once resolved
        full = decomposition_check(nodes=256)
        half = decomposition_check(nodes=128)
        for sign in (PLUS, MINUS):
            assert abs(full[sign] - half[sign]) < 1e-10


class TestAveragingIdentity:
    def test_forward_pair(self):
        assert averaging_identity(1.0, 0.7, 1.0, 2.9) < 1e-12

    def test_thousand_random_quadruples(self):
        rng = np.random.default_rng(56)
        worst = 0.0
        for _ in range(1000):
            c1, c2 = rng.uniform(-1, 1, 2)
            v1, v2 = rng.uniform(0, TWO_PI, 2)
            worst = max(worst, averaging_identity(c1, v1, c2, v2))
        assert worst < 1e-10

    def test_sign_choice_irrelevant(self):
        rng = np.random.default_rng(57)
        for _ in range(50):
            c1, c2 = rng.uniform(-1, 1, 2)
            v1, v2 = rng.uniform(0, TWO_PI, 2)
            r_plus = averaging_identity(c1, v1, c2, v2, sign=PLUS)
            r_minus = averaging_identity(c1, v1, c2, v2, sign=MINUS)
            assert r_plus == pytest.approx(r_minus, abs=1e-12)

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError):
            averaging_identity(0.0, 0.0, 0.0, 0.0, sign=0)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paircompton import models, quadrature
from paircompton.kinematics import BIG_F_INT, TWO_PI, big_f, big_g
from paircompton.models import (
    ModelKind,
    ModelSpec,
    ScatterAngles,
    ansatz_density,
    ansatz_min_density,
    joint_density,
    kn_density,
    naive_phi_density,
    pw_density_fixed,
    recommended_density,
)

SN = 2.0 * np.pi * BIG_F_INT
PN = SN * SN

angle = st.floats(0.0, TWO_PI, allow_nan=False, exclude_max=True)
cosine = st.floats(-1.0, 1.0, allow_nan=False)


def _rand_angles(rng, n):
    return ScatterAngles(rng.uniform(-1.0, 1.0, n), rng.uniform(0.0, TWO_PI, n))


class TestScatterAngles:
    def test_phi_normalized(self):
        a = ScatterAngles(0.25, 3.0 * TWO_PI + 0.5)
        assert a.phi == pytest.approx(0.5, abs=1e-12)
        assert ScatterAngles(0.25, -0.5).phi == pytest.approx(TWO_PI - 0.5, abs=1e-12)
        assert ScatterAngles(0.0, TWO_PI).phi == 0.0

    def test_chi_validated(self):
        with pytest.raises(ValueError):
            ScatterAngles(1.5, 0.0)
        with pytest.raises(ValueError):
            ScatterAngles(np.array([0.0, -2.0]), np.array([0.0, 0.0]))


class TestKnDensity:
    def test_forward_peak(self):
        for phi in (0.0, 1.0, 4.5):
            assert kn_density(ScatterAngles(1.0, phi)) == pytest.approx(2.0 / SN, abs=1e-15)

    def test_right_angle_polarized(self):
        assert kn_density(ScatterAngles(0.0, 0.0)) == pytest.approx((1.0 / 8.0) / SN, abs=1e-16)

    def test_normalized(self):
        total = quadrature.integrate_single(lambda c, p: kn_density(ScatterAngles(c, p)))
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_non_negative_on_grid(self):
        chi = np.linspace(-1, 1, 201)[:, None]
        phi = np.linspace(0, TWO_PI, 128, endpoint=False)[None, :]
        assert np.all(kn_density(ScatterAngles(chi + 0 * phi, phi + 0 * chi)) >= 0.0)


class TestPwDensityFixed:
    def test_both_forward(self):
        a = ScatterAngles(1.0, 0.3)
        b = ScatterAngles(1.0, 5.1)
        assert pw_density_fixed(a, b) == pytest.approx(4.0 / PN, abs=1e-15)

    def test_half_cosine_aligned(self):
        # F(1/2) = 17/27, G(1/2) = 1/3
        val = pw_density_fixed(ScatterAngles(0.5, 1.2), ScatterAngles(0.5, 1.2))
        expect = ((17.0 / 27.0) ** 2 - (1.0 / 3.0) ** 2) / PN
        assert val == pytest.approx(expect, rel=1e-13)

    def test_normalized_4d(self):
        total = quadrature.integrate_pair(
            lambda c1, p1, c2, p2: pw_density_fixed(ScatterAngles(c1, p1), ScatterAngles(c2, p2))
        )
        assert total == pytest.approx(1.0, abs=1e-8)


class TestNaivePhiDensity:
    def test_is_pw_with_flipped_cosine(self):
        rng = np.random.default_rng(3)
        a1, a2 = _rand_angles(rng, 500), _rand_angles(rng, 500)
        flipped = (
            big_f(a1.chi) * big_f(a2.chi)
            + big_g(a1.chi) * big_g(a2.chi) * np.cos(2 * (a2.phi - a1.phi))
        ) / PN
        np.testing.assert_allclose(naive_phi_density(a1, a2), flipped, rtol=1e-14)

    def test_half_cosine_aligned(self):
        val = naive_phi_density(ScatterAngles(0.5, 0.7), ScatterAngles(0.5, 0.7))
        expect = ((17.0 / 27.0) ** 2 + (1.0 / 3.0) ** 2) / PN
        assert val == pytest.approx(expect, rel=1e-13)

    def test_marginal_is_flat_klein_nishina_core(self):
        # integrating out photon 1 leaves F2/(2 pi Fint), flat in phi2
        rng = np.random.default_rng(4)
        chi2 = rng.uniform(-1, 1, 20)
        phi2 = rng.uniform(0, TWO_PI, 20)
        marg = quadrature.marginal_over_first(
            lambda c1, p1, c2, p2: naive_phi_density(ScatterAngles(c1, p1), ScatterAngles(c2, p2)),
            chi2,
            phi2,
        )
        np.testing.assert_allclose(marg, big_f(chi2) / SN, atol=1e-10)

    def test_normalized_4d(self):
        total = quadrature.integrate_pair(
            lambda c1, p1, c2, p2: naive_phi_density(ScatterAngles(c1, p1), ScatterAngles(c2, p2))
        )
        assert total == pytest.approx(1.0, abs=1e-8)


class TestRecommendedDensity:
    def test_factorized_point(self):
        # at phi1 = phi2 = 0 the bracket factorizes to (F1 - G1)(F2 - G2)
        val = recommended_density(ScatterAngles(0.0, 0.0), ScatterAngles(0.0, 0.0))
        assert val == pytest.approx((1.0 / 64.0) / PN, rel=1e-13)

    def test_normalized_4d(self):
        total = quadrature.integrate_pair(
            lambda c1, p1, c2, p2: recommended_density(
                ScatterAngles(c1, p1), ScatterAngles(c2, p2)
            )
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_marginal_is_klein_nishina(self):
        rng = np.random.default_rng(5)
        chi2 = rng.uniform(-1, 1, 100)
        phi2 = rng.uniform(0, TWO_PI, 100)
        marg = quadrature.marginal_over_first(
            lambda c1, p1, c2, p2: recommended_density(
                ScatterAngles(c1, p1), ScatterAngles(c2, p2)
            ),
            chi2,
            phi2,
        )
        target = kn_density(ScatterAngles(chi2, phi2))
        np.testing.assert_allclose(marg, target, atol=1e-8)

    def test_phi_average_recovers_pryce_ward(self):
        rng = np.random.default_rng(6)
        nodes, _ = quadrature.phi_nodes(256)
        for _ in range(50):
            c1, c2 = rng.uniform(-1, 1, 2)
            v1, v2 = rng.uniform(0, TWO_PI, 2)
            sign = rng.choice([-1.0, 1.0])
            vals = recommended_density(
                ScatterAngles(c1, np.mod(v1 - nodes, TWO_PI)),
                ScatterAngles(c2, np.mod(v2 - nodes - sign * np.pi / 2, TWO_PI)),
            )
            target = pw_density_fixed(ScatterAngles(c1, v1), ScatterAngles(c2, v2))
            assert np.mean(vals) == pytest.approx(target, abs=1e-12)

    def test_nonnegative_on_verification_grid(self):
        low = models.grid_min_density(ModelSpec(ModelKind.RECOMMENDED), n_chi=51, n_phi=64)
        assert low >= -1e-12

    @settings(max_examples=60, deadline=None)
    @given(cosine, angle, cosine, angle)
    def test_exchange_symmetry(self, c1, p1, c2, p2):
        a1, a2 = ScatterAngles(c1, p1), ScatterAngles(c2, p2)
        assert recommended_density(a1, a2) == recommended_density(a2, a1)

    @settings(max_examples=60, deadline=None)
    @given(cosine, angle, cosine, angle)
    def test_period_pi_azimuth(self, c1, p1, c2, p2):
        a1, a2 = ScatterAngles(c1, p1), ScatterAngles(c2, p2)
        shifted = ScatterAngles(c1, p1 + np.pi)
        assert recommended_density(shifted, a2) == pytest.approx(
            recommended_density(a1, a2), rel=1e-12, abs=1e-15
        )


class TestAnsatzFamily:
    def test_reduces_to_recommended_at_origin(self):
        rng = np.random.default_rng(7)
        a1, a2 = _rand_angles(rng, 1000), _rand_angles(rng, 1000)
        np.testing.assert_allclose(
            ansatz_density(a1, a2, 0.0, 0.0), recommended_density(a1, a2), rtol=0, atol=1e-16
        )

    @pytest.mark.parametrize("b_ff,b_gg", [(1e-4, 0.0), (0.0, 5e-3), (2e-3, -1e-2)])
    def test_marginal_is_klein_nishina_for_any_parameters(self, b_ff, b_gg):
        rng = np.random.default_rng(8)
        chi2 = rng.uniform(-1, 1, 30)
        phi2 = rng.uniform(0, TWO_PI, 30)
        marg = quadrature.marginal_over_first(
            lambda c1, p1, c2, p2: ansatz_density(
                ScatterAngles(c1, p1), ScatterAngles(c2, p2), b_ff, b_gg
            ),
            chi2,
            phi2,
        )
        np.testing.assert_allclose(marg, kn_density(ScatterAngles(chi2, phi2)), atol=1e-8)

    @pytest.mark.parametrize("b_ff,b_gg", [(1e-4, 0.0), (0.0, 5e-3)])
    def test_phi_average_recovers_pryce_ward_for_any_parameters(self, b_ff, b_gg):
        rng = np.random.default_rng(9)
        nodes, _ = quadrature.phi_nodes(256)
        for _ in range(20):
            c1, c2 = rng.uniform(-1, 1, 2)
            v1, v2 = rng.uniform(0, TWO_PI, 2)
            vals = ansatz_density(
                ScatterAngles(c1, np.mod(v1 - nodes, TWO_PI)),
                ScatterAngles(c2, np.mod(v2 - nodes - np.pi / 2, TWO_PI)),
                b_ff,
                b_gg,
            )
            target = pw_density_fixed(ScatterAngles(c1, v1), ScatterAngles(c2, v2))
            assert np.mean(vals) == pytest.approx(target, abs=1e-12)

    def test_normalized_away_from_origin(self):
        total = quadrature.integrate_pair(
            lambda c1, p1, c2, p2: ansatz_density(
                ScatterAngles(c1, p1), ScatterAngles(c2, p2), 0.0, 5e-3
            )
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_negative_members_returned_unclamped(self):
        spec = ModelSpec(ModelKind.ANSATZ_FAMILY, b_ff=10.0, b_gg=0.0)
        low = models.grid_min_density(spec, n_chi=21, n_phi=32)
        assert low < -1.0  # far outside the feasible band

    def test_min_density_matches_brute_force(self):
        # dual route: closed-form azimuthal minimization vs grid evaluation
        for b_ff, b_gg in [(0.0, 0.0), (1e-3, 0.0), (0.0, 5e-3), (10.0, 0.0)]:
            spec = ModelSpec(ModelKind.ANSATZ_FAMILY, b_ff=b_ff, b_gg=b_gg)
            brute = models.grid_min_density(spec, n_chi=51, n_phi=96)
            exact = ansatz_min_density(b_ff, b_gg, n_chi=51)
            assert exact <= brute + 1e-15
            assert exact == pytest.approx(brute, abs=2e-4)


class TestJointDensityDispatch:
    def test_kn_independent_is_product(self):
        rng = np.random.default_rng(10)
        a1, a2 = _rand_angles(rng, 100), _rand_angles(rng, 100)
        got = joint_density(ModelSpec(ModelKind.KN_INDEPENDENT), a1, a2)
        np.testing.assert_allclose(got, kn_density(a1) * kn_density(a2), rtol=1e-14)

    def test_all_kinds_dispatch(self):
        a1 = ScatterAngles(0.3, 1.0)
        a2 = ScatterAngles(-0.2, 2.0)
        for kind in ModelKind:
            val = joint_density(ModelSpec(kind), a1, a2)
            assert np.isfinite(val) and val > 0.0

    def test_recommended_equals_ansatz_origin_spec(self):
        a1 = ScatterAngles(0.3, 1.0)
        a2 = ScatterAngles(-0.2, 2.0)
        assert joint_density(ModelSpec(ModelKind.RECOMMENDED), a1, a2) == joint_density(
            ModelSpec(ModelKind.ANSATZ_FAMILY, 0.0, 0.0), a1, a2
        )

import time

import numpy as np

from paircompton import models, quantum, verify


class TestFastBattery:
    def test_all_pass_under_ten_seconds(self):
        start = time.monotonic()
        checks = verify.run_verification(fast=True, seed=0)
        elapsed = time.monotonic() - start
        failing = [c.line() for c in checks if not c.passed]
        assert not failing, failing
        assert elapsed < 10.0, f"fast battery took {elapsed:.1f}s"
        assert len(checks) >= 15

    def test_lines_are_informative(self):
        check = verify.check_constants()[0]
        line = check.line()
        assert line.startswith("PASS") and "constants" in line


class TestMutation:
    def test_sign_error_breaks_averaging_identity(self, monkeypatch):
        # flipping the pair-correlation sign must trip the phi-average check
        def wrong_bracket(chi1, phi1, chi2, phi2):
            f1, g1 = models.fg(chi1)
            f2, g2 = models.fg(chi2)
            p1 = np.asarray(phi1, dtype=float)
            p2 = np.asarray(phi2, dtype=float)
            return (
                f1 * f2
                - g1 * g2 * np.cos(2.0 * (p2 - p1))
                - (f2 * g1 * np.cos(2.0 * p1) + f1 * g2 * np.cos(2.0 * p2))
            )

        monkeypatch.setattr(models, "recommended_bracket", wrong_bracket)
        check = verify.check_phi_average(n_points=50, seed=3)
        assert not check.passed

    def test_sign_error_breaks_marginal_check(self, monkeypatch):
        def wrong_density(a1, a2):
            return models.naive_phi_density(a1, a2)

        monkeypatch.setattr(models, "recommended_density", wrong_density)
        check = verify.check_recommended_marginal(n_spots=20)
        assert not check.passed


class TestQuantumSuite:
    def test_all_pass(self):
        checks = verify.quantum_suite()
        failing = [c.line() for c in checks if not c.passed]
        assert not failing, failing

    def test_decomposition_errors_reported(self):
        results = {c.name: c for c in verify.check_decomposition()}
        assert results["quantum.decomposition-plus"].value < 1e-10
        assert results["quantum.decomposition-minus"].value < 1e-10

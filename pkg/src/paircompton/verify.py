"""Named verification checks for every closed-form identity of the models.

Each check returns a CheckResult with the worst observed deviation and its
threshold; run_verification collects the full battery (normalizations,
marginal identities, the polarization-average relation, non-negativity,
symmetries, frame-transform roundtrips, quantum-state identities, and the
staged-versus-joint sampling equivalence).  The fast mode relaxes the
quadrature tolerances to 1e-6 and shrinks grids and event counts so the
whole battery stays under ten seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analysis, models, quadrature, quantum, sampling
from .kinematics import BIG_F_INT, BIG_G_INT, TWO_PI, big_f, big_g, constants
from .models import ModelKind, ModelSpec, ScatterAngles


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: value={self.value:.3e} threshold={self.threshold:.3e} {self.detail}".rstrip()


def _result(name, value, threshold, detail="", larger_is_pass=False) -> CheckResult:
    passed = value >= threshold if larger_is_pass else value <= threshold
    return CheckResult(name, bool(passed), float(value), float(threshold), detail)


# ---------------------------------------------------------------------------
# kinematics

def check_constants(tol: float = 1e-10) -> list:
    from scipy.integrate import quad

    qf, _ = quad(big_f, -1.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    qg, _ = quad(big_g, -1.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    k = constants()
    lam_closed = 5.0 * np.log(3.0) / (18.0 * np.pi * BIG_F_INT)
    return [
        _result("constants.F-integral", abs(qf - BIG_F_INT), tol),
        _result("constants.G-integral", abs(qg - BIG_G_INT), tol),
        _result(
            "constants.lambda-closed-form",
            abs(k.lam - lam_closed),
            5e-5,
            detail=f"lambda={k.lam:.6f}",
        ),
    ]


# ---------------------------------------------------------------------------
# density identities

def _density_4d(model: ModelSpec):
    return lambda c1, p1, c2, p2: models.joint_density(
        model, ScatterAngles(c1, p1), ScatterAngles(c2, p2)
    )


def check_normalizations(tol: float = 1e-8) -> list:
    out = [
        _result(
            "normalization.kn",
            abs(
                quadrature.integrate_single(
                    lambda c, p: models.kn_density(ScatterAngles(c, p))
                )
                - 1.0
            ),
            tol,
        )
    ]
    specs = [
        ModelSpec(ModelKind.PW_FIXED_FRAME),
        ModelSpec(ModelKind.NAIVE_PHI),
        ModelSpec(ModelKind.RECOMMENDED),
        ModelSpec(ModelKind.ANSATZ_FAMILY, b_ff=0.0, b_gg=5e-3),
    ]
    for spec in specs:
        label = spec.name if spec.kind is not ModelKind.ANSATZ_FAMILY else "ansatz(0,5e-3)"
        out.append(
            _result(
                f"normalization.{label}",
                abs(quadrature.integrate_pair(_density_4d(spec)) - 1.0),
                tol,
            )
        )
    return out


def check_recommended_marginal(n_spots: int = 100, tol: float = 1e-8, seed: int = 7) -> CheckResult:
    """Marginal over photon 1 equals the Klein-Nishina density of photon 2."""
    rng = np.random.default_rng(seed)
    chi2 = rng.uniform(-1.0, 1.0, n_spots)
    phi2 = rng.uniform(0.0, TWO_PI, n_spots)
    spec = ModelSpec(ModelKind.RECOMMENDED)
    marg = quadrature.marginal_over_first(_density_4d(spec), chi2, phi2)
    target = models.kn_density(ScatterAngles(chi2, phi2))
    return _result(
        "identity.recommended-marginal-is-kn",
        float(np.abs(marg - target).max()),
        tol,
        detail=f"{n_spots} spot points",
    )


def check_phi_average(n_points: int = 1000, tol: float = 1e-10, seed: int = 11) -> CheckResult:
    """Polarization average of the reconciled bracket equals Pryce-Ward."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        c1, c2 = rng.uniform(-1.0, 1.0, 2)
        v1, v2 = rng.uniform(0.0, TWO_PI, 2)
        sign = quantum.PLUS if rng.integers(0, 2) else quantum.MINUS
        worst = max(worst, quantum.averaging_identity(c1, v1, c2, v2, sign=sign))
    return _result(
        "identity.phi-average-recovers-pryce-ward",
        worst,
        tol,
        detail=f"{n_points} random angle quadruples",
    )


def check_nonnegativity(n_chi: int = 51, n_phi: int = 64) -> CheckResult:
    low = models.grid_min_density(ModelSpec(ModelKind.RECOMMENDED), n_chi, n_phi)
    return _result(
        "identity.recommended-nonnegative",
        low,
        analysis.FEASIBILITY_TOL,
        detail=f"grid {n_chi}x{n_phi} per photon",
        larger_is_pass=True,
    )


def check_exchange_symmetry(n_points: int = 1000, seed: int = 13) -> CheckResult:
    rng = np.random.default_rng(seed)
    a1 = ScatterAngles(rng.uniform(-1, 1, n_points), rng.uniform(0, TWO_PI, n_points))
    a2 = ScatterAngles(rng.uniform(-1, 1, n_points), rng.uniform(0, TWO_PI, n_points))
    d = models.recommended_density(a1, a2) - models.recommended_density(a2, a1)
    return _result("identity.exchange-symmetry", float(np.abs(d).max()), 0.0)


def check_period_pi(n_points: int = 1000, tol: float = 1e-12, seed: int = 17) -> CheckResult:
    """Every density is unchanged under phi -> phi + pi in either azimuth."""
    rng = np.random.default_rng(seed)
    c1 = rng.uniform(-1, 1, n_points)
    c2 = rng.uniform(-1, 1, n_points)
    p1 = rng.uniform(0, TWO_PI, n_points)
    p2 = rng.uniform(0, TWO_PI, n_points)
    worst = 0.0
    for fn in (models.pw_bracket, models.naive_bracket, models.recommended_bracket):
        base = fn(c1, p1, c2, p2)
        worst = max(worst, float(np.abs(fn(c1, p1 + np.pi, c2, p2) - base).max()))
        worst = max(worst, float(np.abs(fn(c1, p1, c2, p2 + np.pi) - base).max()))
    base = models.kn_bracket(c1, p1)
    worst = max(worst, float(np.abs(models.kn_bracket(c1, p1 + np.pi) - base).max()))
    return _result("identity.period-pi-azimuths", worst, tol)


def check_marginal_curves(tol: float = 1e-8, n_spots: int = 32) -> list:
    """Closed-form phi2-marginal coefficients vs direct quadrature.

    Cross-checks analytic_marginal against marginalizing each pipeline's
    joint density over (chi1, phi1, chi2) at azimuthal spot points.  The
    staged direct-Pryce-Ward pipeline's implicit joint density is the naive
    polarization-relative form reweighted by the conditional normalization
    2 pi Fint p(chi1, phi1) / F1.
    """
    phi2 = np.arange(n_spots) * (TWO_PI / n_spots)
    xc, wc = quadrature.chi_nodes(64)
    xp, wp = quadrature.phi_nodes(16)

    def reduced(joint):
        # integrate over chi1, phi1, chi2 leaving phi2
        vals = joint(
            xc[:, None, None, None],
            xp[None, :, None, None],
            xc[None, None, :, None],
            phi2[None, None, None, :],
        )
        return np.einsum("i,j,k,ijks->s", wc, wp, wc, vals)

    def staged_pw_joint(c1, p1, c2, p2):
        f1 = big_f(c1)
        kn1 = models.kn_density(ScatterAngles(c1, p1))
        naive = models.naive_phi_density(ScatterAngles(c1, p1), ScatterAngles(c2, p2))
        return TWO_PI * BIG_F_INT * kn1 * naive / f1

    pipelines = {
        "kn-independent": _density_4d(ModelSpec(ModelKind.KN_INDEPENDENT)),
        "pw-direct": staged_pw_joint,
        "pw-joint": _density_4d(ModelSpec(ModelKind.NAIVE_PHI)),
        "recommended": _density_4d(ModelSpec(ModelKind.RECOMMENDED)),
    }
    out = []
    for name, joint in pipelines.items():
        k = analysis.analytic_marginal(name)
        curve = (1.0 - k * np.cos(2.0 * phi2)) / TWO_PI
        err = float(np.abs(reduced(joint) - curve).max())
        out.append(_result(f"identity.marginal-curve.{name}", err, tol))
    return out


# ---------------------------------------------------------------------------
# frames and sampling

def check_frame_roundtrip(n: int = 100000, tol: float = 1e-12, seed: int = 19) -> CheckResult:
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.0, TWO_PI, n)
    frame = sampling.PolarizationFrame(
        rng.uniform(0.0, TWO_PI, n), np.where(rng.integers(0, 2, n) == 1, 1, -1)
    )
    worst = 0.0
    for which in (1, 2):
        back = sampling.to_polarization_frame(
            sampling.to_fixed_frame(phi, frame, which), frame, which
        )
        d = np.abs(back - phi)
        d = np.minimum(d, TWO_PI - d)
        worst = max(worst, float(d.max()))
    return _result("sampling.frame-roundtrip", worst, tol, detail=f"{n} triples, both photons")


def check_staged_vs_joint(n_events: int = 1_000_000, seed: int = 23, bins: int = 32) -> CheckResult:
    """Two-sample chi-square between staged and all-at-once reconciled sampling."""
    joint = sampling.run_pipeline(ModelSpec(ModelKind.RECOMMENDED), n_events, seed=seed)
    staged = sampling.run_pipeline(sampling.RECOMMENDED_STAGED, n_events, seed=seed + 1)
    edges = np.linspace(0.0, TWO_PI, bins + 1)
    h_joint, _, _ = np.histogram2d(joint.photon1.phi, joint.photon2.phi, bins=(edges, edges))
    h_staged, _, _ = np.histogram2d(staged.photon1.phi, staged.photon2.phi, bins=(edges, edges))
    res = analysis.two_sample_chi_square(h_joint, h_staged)
    return _result(
        "sampling.staged-vs-joint-equivalence",
        res.p_value,
        1e-3,
        detail=f"{n_events} events each, {bins}x{bins} bins, reduced chi2 {res.reduced:.3f}",
        larger_is_pass=True,
    )


# ---------------------------------------------------------------------------
# quantum suite

def check_rotated_singlet(n: int = 100, tol: float = 1e-14, seed: int = 29) -> CheckResult:
    rng = np.random.default_rng(seed)
    target = quantum.singlet()
    worst = max(
        float(np.abs(quantum.rotated_singlet(big_phi) - target).max())
        for big_phi in rng.uniform(0.0, TWO_PI, n)
    )
    return _result("quantum.rotated-singlet-invariance", worst, tol, detail=f"{n} random angles")


def check_pair_expectation(n: int = 1000, tol: float = 1e-12, seed: int = 31) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        c1, c2 = rng.uniform(-1.0, 1.0, 2)
        v1, v2 = rng.uniform(0.0, TWO_PI, 2)
        got = quantum.expectation_pair(c1, v1, c2, v2)
        want = float(models.pw_bracket(c1, v1, c2, v2))
        worst = max(worst, abs(got - want))
    return _result("quantum.pair-expectation-is-pryce-ward", worst, tol, detail=f"{n} points")


def check_single_expectation(n: int = 1000, tol: float = 1e-12, seed: int = 37) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        chi = rng.uniform(-1.0, 1.0)
        varphi = rng.uniform(0.0, TWO_PI)
        pol_angle = rng.uniform(0.0, TWO_PI)
        got = quantum.expectation_single(quantum.pol_vector(pol_angle), chi, varphi)
        want = float(models.kn_bracket(chi, varphi - pol_angle))
        worst = max(worst, abs(got - want))
    return _result("quantum.single-expectation-is-klein-nishina", worst, tol, detail=f"{n} points")


def check_decomposition(tol: float = 1e-10) -> list:
    errors = quantum.decomposition_check()
    return [
        _result("quantum.decomposition-plus", errors[quantum.PLUS], tol),
        _result("quantum.decomposition-minus", errors[quantum.MINUS], tol),
    ]


def check_scatter_matrix_psd(n_chi: int = 41, n_phi: int = 32) -> CheckResult:
    """Scattering matrices are symmetric with eigenvalues F +- G >= 0."""
    worst = np.inf
    for chi in np.linspace(-1.0, 1.0, n_chi):
        for phi in np.arange(n_phi) * (TWO_PI / n_phi):
            s = quantum.scatter_matrix(chi, phi)
            if abs(s[0, 1] - s[1, 0]) > 1e-15:
                return _result("quantum.scatter-matrix-psd", -1.0, 0.0, "asymmetric", True)
            worst = min(worst, float(np.linalg.eigvalsh(s).min()))
    return _result(
        "quantum.scatter-matrix-psd", worst, -1e-12, detail="min eigenvalue", larger_is_pass=True
    )


def quantum_suite() -> list:
    out = [check_rotated_singlet(), check_pair_expectation(), check_single_expectation()]
    out.extend(check_decomposition())
    out.append(check_scatter_matrix_psd())
    return out


# ---------------------------------------------------------------------------
# battery

def run_verification(fast: bool = False, seed: int = 0) -> list:
    """The full invariant battery; `fast` trades tolerance for runtime."""
    tol = 1e-6 if fast else 1e-8
    checks = []
    checks.extend(check_constants())
    checks.extend(check_normalizations(tol=tol))
    checks.append(
        check_recommended_marginal(n_spots=25 if fast else 100, tol=tol, seed=seed + 7)
    )
    checks.append(
        check_phi_average(n_points=100 if fast else 1000, tol=1e-10, seed=seed + 11)
    )
    checks.append(
        check_nonnegativity(n_chi=26 if fast else 51, n_phi=32 if fast else 64)
    )
    checks.append(check_exchange_symmetry(seed=seed + 13))
    checks.append(check_period_pi(seed=seed + 17))
    checks.extend(check_marginal_curves(tol=tol))
    checks.append(check_frame_roundtrip(seed=seed + 19))
    checks.extend(quantum_suite())
    checks.append(
        check_staged_vs_joint(n_events=200_000 if fast else 1_000_000, seed=seed + 23)
    )
    return checks

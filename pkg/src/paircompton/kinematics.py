"""Scalar kinematics of 511 keV Compton scattering.

Everything downstream is built from two dimensionless functions of the
polar scattering cosine chi = cos(theta), theta measured from the photon's
initial direction:

    F(chi) = (2 + (1 - chi)^3) / (2 - chi)^3
    G(chi) = sin^2(theta) / (2 - cos(theta))^2 = (1 - chi^2) / (2 - chi)^2

valid only for photons whose energy equals the electron rest energy.  Their
integrals over chi in [-1, 1] have closed forms,

    int F dchi = (40 - 27 ln 3) / 9        (about 1.1486076)
    int G dchi = 4 (ln 3 - 1)              (about 0.3944492)

while the azimuthal suppression factor of the staged pair sampler,

    lambda = (2 int F)^(-1) * int G^2/F dchi,

has no exact closed form and is evaluated here by adaptive quadrature
(5 ln 3 / (18 pi int F) is a very close approximation, about 0.08457).

All cross-section evaluators in this package return dimensionless brackets
or normalized densities.  The physical prefactors r0^2/2 (single photon)
and r0^4/16 (photon pair) are exposed below as documented constants and are
never folded into any returned value: every statistic of interest is a
ratio or a shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

TWO_PI = 2.0 * np.pi

#: Classical electron radius [cm], CODATA 2018.
CLASSICAL_ELECTRON_RADIUS_CM = 2.8179403262e-13

#: Physical prefactor of the single-photon cross section, r0^2/2 [cm^2].
#: Documented only; never applied to the dimensionless evaluators.
SINGLE_PREFACTOR_CM2 = CLASSICAL_ELECTRON_RADIUS_CM**2 / 2.0

#: Physical prefactor of the pair cross section, r0^4/16 [cm^4].
PAIR_PREFACTOR_CM4 = CLASSICAL_ELECTRON_RADIUS_CM**4 / 16.0

#: Closed-form integral of F over chi in [-1, 1].
BIG_F_INT = (40.0 - 27.0 * np.log(3.0)) / 9.0

#: Closed-form integral of G over chi in [-1, 1].
BIG_G_INT = 4.0 * (np.log(3.0) - 1.0)

#: Global maxima on the domain: F peaks at chi = 1, G at chi = 1/2.
F_MAX = 2.0
G_MAX = 1.0 / 3.0

#: sup of F + G over [-1, 1], attained at chi = 1.  (F + G reduces to
#: (chi^2 - 4 chi + 5)/(2 - chi)^3, whose derivative has no real root in
#: the domain, so the sup sits at the right edge.)  This is the constant
#: rejection envelope for the single-photon bracket F - G cos(2 phi).
SUM_FG_MAX = 2.0


def _as_chi(chi):
    """Validate a polar cosine (scalar or array) and return it as ndarray."""
    arr = np.asarray(chi, dtype=float)
    if not np.all((arr >= -1.0) & (arr <= 1.0)):
        raise ValueError("polar scattering cosine must lie in [-1, 1]")
    return arr


def big_f(chi):
    """F(chi) = (2 + (1 - chi)^3) / (2 - chi)^3, strictly positive.

    Accepts scalars or arrays; raises ValueError outside [-1, 1].
    """
    c = _as_chi(chi)
    out = (2.0 + (1.0 - c) ** 3) / (2.0 - c) ** 3
    return out if out.ndim else float(out)


def big_g(chi):
    """G(chi) = (1 - chi^2) / (2 - chi)^2, non-negative, zero at chi = +-1."""
    c = _as_chi(chi)
    out = (1.0 - c * c) / (2.0 - c) ** 2
    return out if out.ndim else float(out)


def fg(chi):
    """Both kinematic functions at once, sharing the (2 - chi) powers."""
    c = _as_chi(chi)
    t = 2.0 - c
    t2 = t * t
    f = (2.0 + (1.0 - c) ** 3) / (t2 * t)
    g = (1.0 - c * c) / t2
    return f, g


@dataclass(frozen=True)
class KinematicConstants:
    """Integral constants of the kinematic functions.

    Attributes:
        big_f_int: int_{-1}^{1} F dchi = (40 - 27 ln 3)/9.
        big_g_int: int_{-1}^{1} G dchi = 4 (ln 3 - 1).
        ratio: big_g_int / big_f_int, the full Klein-Nishina azimuthal
            modulation coefficient (about 0.3434).
        lam: suppression factor (2 big_f_int)^(-1) int G^2/F dchi of the
            staged pair sampler's second-photon modulation (about 0.08457),
            from adaptive quadrature.
    """

    big_f_int: float
    big_g_int: float
    ratio: float
    lam: float


@lru_cache(maxsize=1)
def constants() -> KinematicConstants:
    """Analytic values for the F and G integrals; quadrature for lambda.

    The lambda integrand G^2/F is smooth on [-1, 1] (F > 0 throughout), so
    adaptive quadrature at absolute tolerance 1e-10 is decisive; the
    approximate closed form 5 ln 3/(18 pi big_f_int) agrees to about 6e-7.
    """
    integrand = lambda c: big_g(c) ** 2 / big_f(c)
    integral, _ = quad(integrand, -1.0, 1.0, epsabs=1e-12, epsrel=1e-12)
    lam = integral / (2.0 * BIG_F_INT)
    return KinematicConstants(
        big_f_int=BIG_F_INT,
        big_g_int=BIG_G_INT,
        ratio=BIG_G_INT / BIG_F_INT,
        lam=lam,
    )

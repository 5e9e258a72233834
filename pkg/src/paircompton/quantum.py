"""Polarization-state linear algebra behind the pair densities.

Single-photon linear polarization states live on the real basis
{|x>, |y>}; the two-photon annihilation state is the singlet

    |S> = (|x>|y> - |y>|x>) / sqrt(2),

which is rotationally invariant: rebuilding it from any rotated orthogonal
basis {|P>, |P + pi/2>} returns the same four components, so the state
carries no information about either photon's individual polarization.

The dimensionless single-photon scattering matrix at polar cosine chi and
fixed-frame azimuth varphi is

    S = F I - G cos(2 varphi) sigma_z - G sin(2 varphi) sigma_x,

real and symmetric with eigenvalues F +- G >= 0.  Sandwiching it with a
polarization state gives the Klein-Nishina bracket; sandwiching the 4 x 4
tensor product of two such matrices with the singlet gives the fixed-frame
Pryce-Ward bracket.  Decomposing the singlet into a continuous integral of
separable rotated-basis states (constant coefficients +-1/(pi sqrt 2)) and
averaging the reconciled bracket over the assumed polarization direction
recovers the Pryce-Ward bracket exactly; both identities are evaluated
here by periodic-trapezoid quadrature, which is exact for these
trigonometric-polynomial integrands.

Everything is real-valued: linear polarization bases and these scattering
matrices involve no complex phase.  The physical prefactors r0^2/2 and
r0^4/16 stay in :mod:`paircompton.kinematics` as documented constants.
"""

from __future__ import annotations

import numpy as np

from . import models
from .kinematics import TWO_PI, fg

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
IDENTITY_2 = np.eye(2)

#: Half-pi shift of the second photon's polarization; either sign.
PLUS, MINUS = 1, -1


def pol_vector(big_phi: float) -> np.ndarray:
    """Linear polarization state (cos P, sin P) on the {|x>, |y>} basis."""
    return np.array([np.cos(big_phi), np.sin(big_phi)])


def singlet() -> np.ndarray:
    """The annihilation pair state on the basis (xx, xy, yx, yy)."""
    s = 1.0 / np.sqrt(2.0)
    return np.array([0.0, s, -s, 0.0])


def rotated_singlet(big_phi: float) -> np.ndarray:
    """The singlet rebuilt from the basis rotated by big_phi.

    Constructs |P>|P + pi/2> - |P + pi/2>|P>, normalized; equal to
    singlet() componentwise for every big_phi.
    """
    a = pol_vector(big_phi)
    b = pol_vector(big_phi + np.pi / 2.0)
    state = np.kron(a, b) - np.kron(b, a)
    return state / np.linalg.norm(state)


def scatter_matrix(chi: float, varphi: float) -> np.ndarray:
    """F I - G cos(2 varphi) sigma_z - G sin(2 varphi) sigma_x."""
    f, g = fg(chi)
    return f * IDENTITY_2 - g * np.cos(2.0 * varphi) * SIGMA_Z - g * np.sin(2.0 * varphi) * SIGMA_X


def expectation_single(pol: np.ndarray, chi: float, varphi: float) -> float:
    """<pol| S |pol> for a unit polarization state.

    Equals F - G cos 2(varphi - P) when pol = (cos P, sin P): the
    Klein-Nishina bracket in the azimuth measured from the polarization.
    """
    pol = np.asarray(pol, dtype=float)
    if pol.shape != (2,) or not np.isclose(pol @ pol, 1.0, atol=1e-12):
        raise ValueError("polarization state must be a 2-vector of unit norm")
    return float(pol @ scatter_matrix(chi, varphi) @ pol)


def expectation_pair(chi1: float, varphi1: float, chi2: float, varphi2: float) -> float:
    """<S| S1 x S2 |S> via the explicit 4 x 4 tensor product.

    Equals the fixed-frame Pryce-Ward bracket
    F1 F2 - G1 G2 cos 2(varphi2 - varphi1).
    """
    pair = np.kron(scatter_matrix(chi1, varphi1), scatter_matrix(chi2, varphi2))
    psi = singlet()
    return float(psi @ pair @ psi)


def decomposition_check(nodes: int = 256) -> dict:
    """Reconstruction error of the singlet from separable rotated states.

    Numerically integrates +-(1/(pi sqrt 2)) int |P>|P +- pi/2> dP with a
    periodic trapezoid rule (exact here for nodes >= 4) and returns the max
    componentwise deviation from singlet() for each sign.
    """
    grid = np.arange(nodes) * (TWO_PI / nodes)
    target = singlet()
    errors = {}
    for sign in (PLUS, MINUS):
        acc = np.zeros(4)
        for big_phi in grid:
            a = pol_vector(big_phi)
            b = pol_vector(big_phi + sign * np.pi / 2.0)
            acc += np.kron(a, b)
        state = sign * acc * (TWO_PI / nodes) / (np.pi * np.sqrt(2.0))
        errors[sign] = float(np.abs(state - target).max())
    return errors


def averaging_identity(
    chi1: float,
    varphi1: float,
    chi2: float,
    varphi2: float,
    sign: int = PLUS,
    nodes: int = 256,
) -> float:
    """Residual of the polarization-averaging relation at fixed-frame angles.

    Averages the reconciled bracket over the assumed polarization direction,

        (1/2 pi) int rec(phi1(P), phi2(P, sign)) dP,

    with phi1 = varphi1 - P and phi2 = varphi2 - P - sign pi/2, and returns
    the absolute deviation from the Pryce-Ward bracket at
    (varphi1, varphi2).  The two orthogonality signs give identical
    residuals, since all azimuthal dependence is through cos 2(.).
    """
    if sign not in (PLUS, MINUS):
        raise ValueError("sign must be +1 or -1")
    grid = np.arange(nodes) * (TWO_PI / nodes)
    phi1 = varphi1 - grid
    phi2 = varphi2 - grid - sign * np.pi / 2.0
    mean = float(np.mean(models.recommended_bracket(chi1, phi1, chi2, phi2)))
    target = float(models.pw_bracket(chi1, varphi1, chi2, varphi2))
    return abs(mean - target)

"""Tensor-product quadrature for the angular densities.

The integrands of interest are rational in each polar cosine (poles at
chi = 2, safely outside [-1, 1]) and trigonometric polynomials of degree
two in each azimuth.  Gauss-Legendre handles the chi axes with geometric
convergence, and the periodic trapezoid rule is *exact* on the azimuthal
axes once it has more than two nodes per period of cos(2 phi).  The
defaults below are conservative.
"""

from __future__ import annotations

import numpy as np

from .kinematics import TWO_PI


def chi_nodes(n: int = 64):
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def phi_nodes(n: int = 16):
    """Periodic trapezoid nodes and weights on [0, 2 pi).

    Exact for trigonometric polynomials of degree < n, hence for every
    azimuthal dependence in this package whenever n >= 8.
    """
    x = np.arange(n) * (TWO_PI / n)
    w = np.full(n, TWO_PI / n)
    return x, w


def integrate_single(density, n_chi: int = 64, n_phi: int = 16) -> float:
    """Integral of density(chi, phi) over [-1, 1] x [0, 2 pi)."""
    xc, wc = chi_nodes(n_chi)
    xp, wp = phi_nodes(n_phi)
    vals = density(xc[:, None], xp[None, :])
    return float(np.einsum("i,j,ij->", wc, wp, vals))


def integrate_pair(density, n_chi: int = 48, n_phi: int = 16) -> float:
    """Integral of density(chi1, phi1, chi2, phi2) over the full 4D domain."""
    xc, wc = chi_nodes(n_chi)
    xp, wp = phi_nodes(n_phi)
    total = 0.0
    # chunk over chi1 to keep the 4D tensor small
    for x1, w1 in zip(xc, wc):
        vals = density(
            x1,
            xp[:, None, None],
            xc[None, :, None],
            xp[None, None, :],
        )
        total += w1 * np.einsum("j,k,l,jkl->", wp, wc, wp, vals)
    return float(total)


def marginal_over_first(density, chi2, phi2, n_chi: int = 64, n_phi: int = 16):
    """Integrate density over (chi1, phi1) at fixed second-photon angles."""
    xc, wc = chi_nodes(n_chi)
    xp, wp = phi_nodes(n_phi)
    c2 = np.asarray(chi2, dtype=float)
    p2 = np.asarray(phi2, dtype=float)
    vals = density(
        xc[:, None, None],
        xp[None, :, None],
        c2.reshape(-1)[None, None, :],
        p2.reshape(-1)[None, None, :],
    )
    out = np.einsum("i,j,ijs->s", wc, wp, vals)
    return out.reshape(c2.shape) if c2.ndim else float(out[0])


def phi_average(fn, n: int = 256):
    """Mean of fn(big_phi) over big_phi in [0, 2 pi), periodic trapezoid.

    fn may return an array (broadcast over a trailing axis of nodes).
    """
    x, _ = phi_nodes(n)
    return np.mean(fn(x), axis=-1)

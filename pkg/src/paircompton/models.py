"""Joint and single scattering densities for the annihilation photon pair.

Four joint models are evaluated, all as normalized probability densities
over (chi1, phi1, chi2, phi2) and all sharing the normalization constants
of :mod:`paircompton.kinematics`:

* independent Klein-Nishina -- the product of two single-photon densities
  p(chi, phi) = (F - G cos 2 phi) / (2 pi Fint), each azimuth measured
  from its photon's initial polarization;

* fixed-frame Pryce-Ward -- the entangled-pair density
  (F1 F2 - G1 G2 cos 2(phi2 - phi1)) / (2 pi Fint)^2 with both azimuths
  measured from a common laboratory axis;

* the naive polarization-relative form -- the same bracket with the cosine
  sign flipped, which arises when the Pryce-Ward density is re-expressed in
  polarization-relative azimuths and which loses the single-photon
  modulation entirely;

* the reconciled ("recommended") form --

      F1 F2 + G1 G2 cos 2(phi2 - phi1)
             - (F2 G1 cos 2 phi1 + F1 G2 cos 2 phi2),

  normalized by (2 pi Fint)^2, which restores the Klein-Nishina marginal
  for each photon while its average over a uniformly distributed
  polarization direction reproduces the fixed-frame Pryce-Ward density.

The recommended form is the (0, 0) member of a two-parameter family
(`ansatz_density`) that satisfies the same marginal and averaging
constraints for every (b_ff, b_gg); non-negativity holds only on a narrow
parameter band, which :func:`paircompton.analysis.scan_ansatz` maps.

Densities come paired with "bracket" evaluators returning the raw
dimensionless square-bracket factors (no normalization, no physical
prefactor); the quantum-expectation module checks its matrix elements
against those brackets directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .kinematics import (
    BIG_F_INT,
    BIG_G_INT,
    F_MAX,
    G_MAX,
    TWO_PI,
    fg,
)

#: Normalization of the single-photon density.
SINGLE_NORM = TWO_PI * BIG_F_INT

#: Normalization of every pair density.
PAIR_NORM = (TWO_PI * BIG_F_INT) ** 2

#: Coupling of the ansatz free parameters, (2 pi Fint)^2 / (Fint * Gint).
_ANSATZ_COUPLING = PAIR_NORM / (BIG_F_INT * BIG_G_INT)


class ModelKind(Enum):
    """Which joint-scattering density governs sampling and evaluation."""

    KN_INDEPENDENT = "kn-independent"
    PW_FIXED_FRAME = "pw-joint"
    NAIVE_PHI = "naive-phi"
    RECOMMENDED = "recommended"
    ANSATZ_FAMILY = "ansatz"


@dataclass(frozen=True)
class ModelSpec:
    """A joint model plus the ansatz family's free parameters.

    b_ff and b_gg are meaningful only for ANSATZ_FAMILY; the recommended
    model is identically the (0, 0) member of the family.
    """

    kind: ModelKind
    b_ff: float = 0.0
    b_gg: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, ModelKind):
            object.__setattr__(self, "kind", ModelKind(self.kind))
        if not (np.isfinite(self.b_ff) and np.isfinite(self.b_gg)):
            raise ValueError("ansatz parameters must be finite")

    @property
    def name(self) -> str:
        return self.kind.value

    @classmethod
    def from_name(cls, name: str, b_ff: float = 0.0, b_gg: float = 0.0) -> "ModelSpec":
        return cls(ModelKind(name), b_ff, b_gg)


@dataclass(frozen=True)
class ScatterAngles:
    """One photon's scattering outcome in a stated azimuthal frame.

    chi is the polar scattering cosine; phi the azimuth in radians,
    normalized into [0, 2 pi) on construction.  Fields may be scalars or
    equally shaped arrays.
    """

    chi: object
    phi: object

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=float)
        if not np.all((chi >= -1.0) & (chi <= 1.0)):
            raise ValueError("polar scattering cosine must lie in [-1, 1]")
        phi = np.mod(np.asarray(self.phi, dtype=float), TWO_PI)
        if chi.ndim == 0 and phi.ndim == 0:
            chi, phi = float(chi), float(phi)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "phi", phi)


# ---------------------------------------------------------------------------
# brackets: raw dimensionless square-bracket factors

def kn_bracket(chi, phi):
    """F - G cos 2 phi, the single-photon bracket; phi polarization-relative."""
    f, g = fg(chi)
    return f - g * np.cos(2.0 * np.asarray(phi, dtype=float))


def _cos2_delta(phi1, phi2):
    # |p2 - p1| keeps the value bitwise symmetric under photon exchange
    d = np.abs(np.asarray(phi2, dtype=float) - np.asarray(phi1, dtype=float))
    return np.cos(2.0 * d)


def pw_bracket(chi1, varphi1, chi2, varphi2):
    """F1 F2 - G1 G2 cos 2(varphi2 - varphi1); fixed-frame azimuths."""
    f1, g1 = fg(chi1)
    f2, g2 = fg(chi2)
    return f1 * f2 - g1 * g2 * _cos2_delta(varphi1, varphi2)


def naive_bracket(chi1, phi1, chi2, phi2):
    """F1 F2 + G1 G2 cos 2(phi2 - phi1); polarization-relative azimuths."""
    f1, g1 = fg(chi1)
    f2, g2 = fg(chi2)
    return f1 * f2 + g1 * g2 * _cos2_delta(phi1, phi2)


def recommended_bracket(chi1, phi1, chi2, phi2):
    """The reconciled pair bracket in polarization-relative azimuths.

    F1 F2 + G1 G2 cos 2(phi2 - phi1) - F2 G1 cos 2 phi1 - F1 G2 cos 2 phi2;
    equal to the product of the two single-photon brackets plus
    G1 G2 sin 2 phi1 sin 2 phi2, hence strictly positive on the domain.
    The terms are grouped so photon exchange is exact in floating point.
    """
    f1, g1 = fg(chi1)
    f2, g2 = fg(chi2)
    p1 = np.asarray(phi1, dtype=float)
    p2 = np.asarray(phi2, dtype=float)
    return (
        f1 * f2
        + g1 * g2 * _cos2_delta(p1, p2)
        - (f2 * g1 * np.cos(2.0 * p1) + f1 * g2 * np.cos(2.0 * p2))
    )


def ansatz_bracket(chi1, phi1, chi2, phi2, b_ff, b_gg):
    """The two-parameter family bracket; reduces to the recommended one at 0.

    The free-parameter terms are built on (Gint F - Fint G) factors whose
    chi-integrals vanish, so the Klein-Nishina marginals and the
    polarization-average identity hold for every (b_ff, b_gg).
    """
    f1, g1 = fg(chi1)
    f2, g2 = fg(chi2)
    p1 = np.asarray(phi1, dtype=float)
    p2 = np.asarray(phi2, dtype=float)
    c1 = np.cos(2.0 * p1)
    c2 = np.cos(2.0 * p2)
    base = f1 * f2 + g1 * g2 * _cos2_delta(p1, p2) - (f2 * g1 * c1 + f1 * g2 * c2)
    extra = (BIG_G_INT * f2 - BIG_F_INT * g2) * (
        b_ff * BIG_F_INT * f1 - b_gg * BIG_G_INT * g1
    ) * c1 + (BIG_G_INT * f1 - BIG_F_INT * g1) * (
        b_ff * BIG_F_INT * f2 - b_gg * BIG_G_INT * g2
    ) * c2
    return base + _ANSATZ_COUPLING * extra


# ---------------------------------------------------------------------------
# normalized densities

def kn_density(a: ScatterAngles):
    """Single-photon density (F - G cos 2 phi) / (2 pi Fint)."""
    return kn_bracket(a.chi, a.phi) / SINGLE_NORM


def pw_density_fixed(a1: ScatterAngles, a2: ScatterAngles):
    """Entangled-pair density in fixed-frame azimuths."""
    return pw_bracket(a1.chi, a1.phi, a2.chi, a2.phi) / PAIR_NORM


def naive_phi_density(a1: ScatterAngles, a2: ScatterAngles):
    """Polarization-relative pair density with the flipped cosine sign."""
    return naive_bracket(a1.chi, a1.phi, a2.chi, a2.phi) / PAIR_NORM


def recommended_density(a1: ScatterAngles, a2: ScatterAngles):
    """The reconciled pair density in polarization-relative azimuths."""
    return recommended_bracket(a1.chi, a1.phi, a2.chi, a2.phi) / PAIR_NORM


def ansatz_density(a1: ScatterAngles, a2: ScatterAngles, b_ff: float, b_gg: float):
    """The two-parameter family density.

    Values are returned as-is: members outside the feasible parameter band
    go negative somewhere, and clamping would corrupt the feasibility scan.
    """
    return ansatz_bracket(a1.chi, a1.phi, a2.chi, a2.phi, b_ff, b_gg) / PAIR_NORM


def joint_density(model: ModelSpec, a1: ScatterAngles, a2: ScatterAngles):
    """Evaluate the joint density selected by a ModelSpec.

    For KN_INDEPENDENT this is the product of single-photon densities; for
    PW_FIXED_FRAME the azimuths are interpreted as fixed-frame angles, for
    the rest as polarization-relative angles.
    """
    kind = model.kind
    if kind is ModelKind.KN_INDEPENDENT:
        return kn_density(a1) * kn_density(a2)
    if kind is ModelKind.PW_FIXED_FRAME:
        return pw_density_fixed(a1, a2)
    if kind is ModelKind.NAIVE_PHI:
        return naive_phi_density(a1, a2)
    if kind is ModelKind.RECOMMENDED:
        return recommended_density(a1, a2)
    if kind is ModelKind.ANSATZ_FAMILY:
        return ansatz_density(a1, a2, model.b_ff, model.b_gg)
    raise ValueError(f"unknown model kind: {kind!r}")


# ---------------------------------------------------------------------------
# extrema of the family, used by the feasibility scan and the samplers

def _ansatz_phi_coefficients(b_ff, b_gg, n_chi):
    """Bracket coefficients on a chi1 x chi2 grid.

    Returns (c0, c1, d1, d2) such that on the grid the bracket equals
    c0 + c1 cos 2(phi2 - phi1) + d1 cos 2 phi1 + d2 cos 2 phi2.
    """
    chi = np.linspace(-1.0, 1.0, n_chi)
    f, g = fg(chi)
    f1, g1 = f[:, None], g[:, None]
    f2, g2 = f[None, :], g[None, :]
    c0 = f1 * f2
    c1 = g1 * g2
    d1 = -f2 * g1 + _ANSATZ_COUPLING * (BIG_G_INT * f2 - BIG_F_INT * g2) * (
        b_ff * BIG_F_INT * f1 - b_gg * BIG_G_INT * g1
    )
    d2 = -f1 * g2 + _ANSATZ_COUPLING * (BIG_G_INT * f1 - BIG_F_INT * g1) * (
        b_ff * BIG_F_INT * f2 - b_gg * BIG_G_INT * g2
    )
    return c0, c1, d1, d2


def ansatz_min_density(b_ff: float, b_gg: float, n_chi: int = 51) -> float:
    """Minimum of the ansatz density, exact in the azimuths.

    For fixed (chi1, chi2) the bracket's azimuthal minimum has a closed
    form: minimizing over phi2 first collapses the cos 2 phi2 / sin 2 phi2
    pair to minus its amplitude, leaving a function of u = cos 2 phi1,

        g(u) = c0 + d1 u - sqrt(c1^2 + d2^2 + 2 c1 d2 u),

    which is convex on [-1, 1], so its minimum sits at an endpoint or the
    single interior stationary point.  Only chi remains gridded.
    """
    c0, c1, d1, d2 = _ansatz_phi_coefficients(b_ff, b_gg, n_chi)
    beta = c1 * c1 + d2 * d2
    gamma = 2.0 * c1 * d2

    def g(u):
        return c0 + d1 * u - np.sqrt(np.maximum(beta + gamma * u, 0.0))

    best = np.minimum(g(-1.0), g(1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        root = gamma / (2.0 * d1)
        u_star = (root * root - beta) / gamma
        interior = (root > 0.0) & np.isfinite(u_star) & (np.abs(u_star) < 1.0)
        candidate = np.where(interior, c0 + d1 * u_star - root, np.inf)
    best = np.minimum(best, candidate)
    return float(best.min()) / PAIR_NORM


def ansatz_envelope(b_ff: float, b_gg: float) -> float:
    """A provable constant upper bound on the ansatz bracket.

    The recommended part obeys bracket <= (F1 + G1)(F2 + G2) <= 4; the
    free-parameter terms are bounded by interval arithmetic with F <= 2,
    G <= 1/3 and |Gint F - Fint G| <= 2 Gint.
    """
    extra = (
        2.0
        * _ANSATZ_COUPLING
        * (2.0 * BIG_G_INT)
        * (abs(b_ff) * BIG_F_INT * F_MAX + abs(b_gg) * BIG_G_INT * G_MAX)
    )
    return 4.0 + extra


@lru_cache(maxsize=16)
def grid_min_density(model: ModelSpec, n_chi: int = 51, n_phi: int = 64) -> float:
    """Brute-force density minimum on the verification grid.

    The grid is n_chi equispaced polar cosines per photon crossed with
    n_phi equispaced azimuths per photon (the azimuthal dependence has
    period pi, so 64 azimuthal nodes resolve it amply).  Chunked over chi1
    to bound memory.
    """
    chi = np.linspace(-1.0, 1.0, n_chi)
    phi = np.arange(n_phi) * (TWO_PI / n_phi)
    p1 = phi[:, None, None]
    a2 = ScatterAngles(chi[None, :, None], phi[None, None, :])
    lowest = np.inf
    for x1 in chi:
        vals = joint_density(model, ScatterAngles(np.asarray(x1), p1), a2)
        lowest = min(lowest, float(vals.min()))
    return lowest

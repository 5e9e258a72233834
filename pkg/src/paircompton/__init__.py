"""Monte Carlo models of the joint Compton scattering of annihilation photons.

Back-to-back 511 keV photons from para-positronium annihilation scatter
with azimuthal correlations described by the entangled-pair (Pryce-Ward)
cross section, while each photon alone follows the Klein-Nishina law
relative to its initial polarization.  This package evaluates and samples
both descriptions, the naive polarization-relative form, and the
reconciled joint density that restores single-photon statistics while
keeping the pair correlations, together with quadrature and
polarization-state verifications of every closed-form identity relating
them.
"""

from .kinematics import (
    BIG_F_INT,
    BIG_G_INT,
    CLASSICAL_ELECTRON_RADIUS_CM,
    PAIR_PREFACTOR_CM4,
    SINGLE_PREFACTOR_CM2,
    KinematicConstants,
    big_f,
    big_g,
    constants,
)
from .models import (
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
from .sampling import (
    PW_DIRECT,
    RECOMMENDED_STAGED,
    OrthSign,
    PairEvent,
    PolarizationFrame,
    RandomStream,
    run_pipeline,
    sample_frame,
    sample_joint,
    sample_kn,
    sample_pw_conditional,
    sample_pw_direct,
    to_fixed_frame,
    to_polarization_frame,
)
from .analysis import (
    FeasibilityMap,
    Histogram,
    ModulationEstimate,
    analytic_marginal,
    chi_square,
    estimate_modulation,
    histogram_phi,
    reduced_2d,
    scan_ansatz,
    two_sample_chi_square,
)
from .quantum import (
    averaging_identity,
    decomposition_check,
    expectation_pair,
    expectation_single,
    rotated_singlet,
    scatter_matrix,
    singlet,
)

__version__ = "0.1.0"

__all__ = [
    "BIG_F_INT",
    "BIG_G_INT",
    "CLASSICAL_ELECTRON_RADIUS_CM",
    "PAIR_PREFACTOR_CM4",
    "SINGLE_PREFACTOR_CM2",
    "KinematicConstants",
    "big_f",
    "big_g",
    "constants",
    "ModelKind",
    "ModelSpec",
    "ScatterAngles",
    "ansatz_density",
    "ansatz_min_density",
    "joint_density",
    "kn_density",
    "naive_phi_density",
    "pw_density_fixed",
    "recommended_density",
    "PW_DIRECT",
    "RECOMMENDED_STAGED",
    "OrthSign",
    "PairEvent",
    "PolarizationFrame",
    "RandomStream",
    "run_pipeline",
    "sample_frame",
    "sample_joint",
    "sample_kn",
    "sample_pw_conditional",
    "sample_pw_direct",
    "to_fixed_frame",
    "to_polarization_frame",
    "FeasibilityMap",
    "Histogram",
    "ModulationEstimate",
    "analytic_marginal",
    "chi_square",
    "estimate_modulation",
    "histogram_phi",
    "reduced_2d",
    "scan_ansatz",
    "two_sample_chi_square",
    "averaging_identity",
    "decomposition_check",
    "expectation_pair",
    "expectation_single",
    "rotated_singlet",
    "scatter_matrix",
    "singlet",
    "__version__",
]

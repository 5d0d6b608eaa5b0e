"""Chaos signatures in the effective Floquet dynamics of a probed bosonic
Josephson junction.

The probe correlator of the dispersively coupled model reduces to repeated
application of the alternating unitary F = exp(-i H_1 t) exp(-i H_2 t) on the
bosons alone.  This package builds that operator, its eigenphase statistics,
survival probabilities with their random-matrix references, and the classical
(mean-field) alternating dynamics with Lyapunov exponents.
"""

__version__ = "0.1.0"

from .errors import (
    BasisError,
    ConfigError,
    ContractViolationError,
    InsufficientDataError,
    PoleProximityError,
    TtclabError,
)
from .floquet import (
    FloquetDecomposition,
    bch_short_time_residual,
    build_floquet,
    build_ut,
    eigenphase_sweep,
    floquet_power,
)
from .meanfield import (
    ClassicalState,
    FullClassicalState,
    LyapunovResult,
    evolve_full_model,
    evolve_h1,
    evolve_h2,
    great_circle_distance,
    lyapunov_max,
    phase_portrait,
    stroboscopic_orbit,
)
from .model import (
    ModelParams,
    build_dot_sigma_x,
    build_full_hamiltonian,
    build_h1,
    build_h2,
    build_hb,
)
from .spectral import (
    R_COE,
    R_POISSON,
    RmtReference,
    SpacingRatioResult,
    mean_r_sweep,
    spacing_ratios,
)
from .spin import (
    HermitianEigenSystem,
    SpinBasisSpec,
    UnitaryEigenSystem,
    build_sx,
    build_sy,
    build_sz,
    eig_hermitian,
    eig_unitary,
    expm_hermitian,
)
from .survival import (
    QuantumState,
    RmtSaturation,
    StateBasis,
    SurvivalSeries,
    basis_averaged_survival,
    ipr_of_state,
    make_random_basis,
    make_state,
    make_sx_eigen_basis,
    make_sz_fock_basis,
    rmt_saturation,
    survival_probability,
    ttc_amplitude,
    verify_reduction,
)

__all__ = [
    "__version__",
    "BasisError",
    "ConfigError",
    "ContractViolationError",
    "InsufficientDataError",
    "PoleProximityError",
    "TtclabError",
    "SpinBasisSpec",
    "HermitianEigenSystem",
    "UnitaryEigenSystem",
    "build_sx",
    "build_sy",
    "build_sz",
    "eig_hermitian",
    "eig_unitary",
    "expm_hermitian",
    "ModelParams",
    "build_hb",
    "build_h1",
    "build_h2",
    "build_full_hamiltonian",
    "build_dot_sigma_x",
    "FloquetDecomposition",
    "build_floquet",
    "floquet_power",
    "build_ut",
    "bch_short_time_residual",
    "eigenphase_sweep",
    "R_COE",
    "R_POISSON",
    "RmtReference",
    "SpacingRatioResult",
    "spacing_ratios",
    "mean_r_sweep",
    "QuantumState",
    "StateBasis",
    "SurvivalSeries",
    "RmtSaturation",
    "ttc_amplitude",
    "survival_probability",
    "basis_averaged_survival",
    "ipr_of_state",
    "make_state",
    "make_random_basis",
    "make_sz_fock_basis",
    "make_sx_eigen_basis",
    "rmt_saturation",
    "verify_reduction",
    "ClassicalState",
    "FullClassicalState",
    "LyapunovResult",
    "evolve_h1",
    "evolve_h2",
    "evolve_full_model",
    "stroboscopic_orbit",
    "phase_portrait",
    "lyapunov_max",
    "great_circle_distance",
]

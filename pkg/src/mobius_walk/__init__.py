"""Discrete-time Möbius quantum walks on N-cycles."""

from .errors import *  # noqa: F401,F403
from .limiting import (
    AlphaClass,
    DegeneracyReport,
    Distribution,
    Kind,
    Provenance,
    degeneracy_report,
    empirical_average_distribution,
    extremum_pattern,
    limiting_distribution_closed_form,
    limiting_distribution_general,
    predicted_pattern,
    qwc_limiting_distribution,
)
from .mixing import (
    MixingReport,
    convergence_bound,
    distance,
    empirical_mixing_time,
)
from .spectral import (
    EigenPair,
    Eigensystem,
    KBlock,
    SpectralState,
    build_kblock,
    decompose_initial,
    eigensystem,
    eigensystem_analytic,
    eigensystem_numeric,
    fourier_forward,
    fourier_inverse,
    spectral_evolve,
)
from .walk import (
    HADAMARD,
    FullVector,
    Localized,
    RotationMatrices,
    WalkerState,
    WalkParams,
    evolve,
    initial_state,
    make_params,
    position_distribution,
    rotation_matrices,
    step,
)

__version__ = "0.1.0"

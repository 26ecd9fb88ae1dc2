"""Gaussian fermionic states in rotated spin bases.

Amplitudes and probabilities of fermionic Gaussian states in the occupation
basis and in the ``(φ, π/2, α)`` family of rotated bases, formation
probabilities of the critical transverse-field Ising chain, and finite-size
scaling fits of their universal terms.
"""

from .basis import BasisSpec, DualMatrices, amplitude_phi, basis_vector, dual_matrix
from .correlators import CorrelationSet, correlations, kw_residuals
from .exceptions import (
    DegenerateGroundState,
    GaussBasisError,
    IllConditionedFit,
    InsufficientData,
    NotRealMatrix,
    SingularBlock,
    SingularCayley,
    SingularG,
    SingularQ,
    SizeLimit,
    StructureError,
    ZeroAmplitudeBase,
)
from .pfaffian import pfaffian, pfaffinho, skew_circulant_spectrum, spectral_pfaffinho
from .probability import prob_phi, prob_x, prob_y, prob_z, prob_z_real
from .scaling import BoundaryClass, ScalingFit, classify, fit_obc, fit_pbc
from .state import GaussianState, GenericGaussianExponent, amplitude_z, from_generic, rebase
from .tfi import CrystalConfig, TFIModel, scan_formation, tfi_G, tfi_R

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "BoundaryClass",
    "CorrelationSet",
    "CrystalConfig",
    "DegenerateGroundState",
    "DualMatrices",
    "GaussBasisError",
    "GaussianState",
    "GenericGaussianExponent",
    "IllConditionedFit",
    "InsufficientData",
    "NotRealMatrix",
    "ScalingFit",
    "SingularBlock",
    "SingularCayley",
    "SingularG",
    "SingularQ",
    "SizeLimit",
    "StructureError",
    "TFIModel",
    "ZeroAmplitudeBase",
    "amplitude_phi",
    "amplitude_z",
    "basis_vector",
    "classify",
    "correlations",
    "dual_matrix",
    "fit_obc",
    "fit_pbc",
    "from_generic",
    "kw_residuals",
    "pfaffian",
    "pfaffinho",
    "prob_phi",
    "prob_x",
    "prob_y",
    "prob_z",
    "prob_z_real",
    "rebase",
    "scan_formation",
    "skew_circulant_spectrum",
    "spectral_pfaffinho",
    "tfi_G",
    "tfi_R",
]

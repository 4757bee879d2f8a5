# python imports
import sys

# pycasimir interface
from ._logging import init_logging
from .beta_table import (beta_at_zero, beta_envelope, beta_eval,
                         beta_eval_asymptotic, beta_poly, beta_tail_envelope,
                         beta_T0_exact)
from .errors import (BetaIndexError, CasimirError, ConfigError,
                     ConvergenceError, DomainError, StencilError,
                     ValidationError, ValidityWarning)
from .eta_retarded import (EtaCoefficients, classical_coefficients,
                           classical_from_beta, eta_coefficients,
                           u_classical, u_retarded)
from .geometry import (LocalGeometry, SurfaceProfile,
                       local_geometry_from_profile, to_principal_frame)
from .potential import OrientationScan, orientation_scan, u_full
from .specfun import exp_integral_E1, exp_integral_E1_scaled, table_Ei
from .thermal import (BetaSumResult, ThermalConfig, beta_classical,
                      beta_T0_integral, beta_tilde, beta_tilde_low_temperature,
                      beta_tilde_table, matsubara_beta_sum,
                      normalized_beta_curve)
from .types import (ALL_INDICES, BetaIndex, Channel, EnergyUnit,
                    ExpansionOrder, Frame, PolarizabilityTensor,
                    PotentialBreakdown)

__all__ = ["beta_at_zero", "beta_classical", "beta_envelope", "beta_eval",
           "beta_eval_asymptotic", "beta_poly", "beta_tail_envelope",
           "beta_T0_exact",
           "beta_T0_integral", "beta_tilde", "beta_tilde_low_temperature",
           "beta_tilde_table", "classical_coefficients",
           "classical_from_beta", "eta_coefficients", "exp_integral_E1",
           "exp_integral_E1_scaled", "init_logging",
           "local_geometry_from_profile", "matsubara_beta_sum",
           "normalized_beta_curve", "orientation_scan", "table_Ei",
           "to_principal_frame", "u_classical", "u_full", "u_retarded",
           "ALL_INDICES", "BetaIndex", "BetaIndexError", "BetaSumResult",
           "CasimirError", "Channel", "ConfigError", "ConvergenceError",
           "DomainError", "EnergyUnit", "EtaCoefficients", "ExpansionOrder",
           "Frame", "LocalGeometry", "OrientationScan",
           "PolarizabilityTensor", "PotentialBreakdown", "StencilError",
           "SurfaceProfile", "ThermalConfig", "ValidationError",
           "ValidityWarning"]

if sys.version_info >= (3, 8):
    from importlib import metadata
else:
    import importlib_metadata as metadata

# **NOTE** running from a source checkout leaves the package unregistered
try:
    __version__ = metadata.version("pycasimir")
except metadata.PackageNotFoundError:
    __version__ = "unknown"

"""peakforge: ground states of the limit profile equation and the
constants that govern peak concentration on product spaces.

The package solves the radial problem

    u'' + (n-1)/r u' - u + u^{p-1} = 0,   u(0) = alpha_0,  u -> 0,

at the limit exponent p = 2(n+m)/(n+m-2) of an n-dimensional factor
times an m-dimensional flat one, then turns the profile into the
scalar constants (alpha, beta, gamma) of the second-order reduced
energy of multi-peak configurations, and maximizes that energy over
peak positions on a model manifold (round sphere, or Euclidean space
with a synthetic curvature field).
"""

from .dimensions import Dimensions
from .shooting import (BracketingError, IntegrationError, ShootingConfig,
                       ShotKind, ShotOutcome, classify_shot, find_alpha0,
                       ground_state_profile)
from .profile import (RadialIntegrand, RadialProfile, TailFit, TailFitError,
                      default_tail_window, eval_du, eval_u, fit_tail,
                      load_profile, profile_residual, radial_integral,
                      save_profile)
from .constants import (DEFAULT_ROWS, REFERENCE_TABLE, GroundStateConstants,
                        TableRow, beta_table, compute_alpha_energy,
                        compute_beta, compute_gamma, compute_mE,
                        ground_state_constants, sphere_volume)
from .manifolds import (CURVATURE_FAMILIES, AdmissibilityReport,
                        EuclideanModel, ModelConfigError, PeakConfiguration,
                        SphereModel, admissibility_report, euclidean_model,
                        model_from_config)
from .landscape import (NoAdmissibleStartError, OptimizerConfig,
                        ReducedEnergyReport, optimize_peaks, reduced_energy,
                        seed_peaks)
from .sphere_energy import (CutoffSpec, SlopeCheck, curvature_slope_check,
                            cutoff_chi, cutoff_dchi, flat_peak_energy,
                            single_peak_energy)

__version__ = "0.1.0"

__all__ = [
    "Dimensions",
    "BracketingError", "IntegrationError", "ShootingConfig",
    "ShotKind", "ShotOutcome", "classify_shot", "find_alpha0",
    "ground_state_profile",
    "RadialIntegrand", "RadialProfile", "TailFit", "TailFitError",
    "default_tail_window", "eval_du", "eval_u", "fit_tail",
    "load_profile", "profile_residual", "radial_integral", "save_profile",
    "DEFAULT_ROWS", "REFERENCE_TABLE", "GroundStateConstants", "TableRow",
    "beta_table", "compute_alpha_energy", "compute_beta", "compute_gamma",
    "compute_mE", "ground_state_constants", "sphere_volume",
    "CURVATURE_FAMILIES", "AdmissibilityReport", "EuclideanModel",
    "ModelConfigError", "PeakConfiguration", "SphereModel",
    "admissibility_report", "euclidean_model", "model_from_config",
    "NoAdmissibleStartError", "OptimizerConfig", "ReducedEnergyReport",
    "optimize_peaks", "reduced_energy", "seed_peaks",
    "CutoffSpec", "SlopeCheck", "curvature_slope_check", "cutoff_chi",
    "cutoff_dchi", "flat_peak_energy", "single_peak_energy",
    "__version__",
]

"""Numerical laboratory for the alpha-Szego equation i du/dt = Pi(|u|^2 u) + alpha (u|1).

Three levels of description are implemented and cross-checked against each
other: a truncated spectral Galerkin solver on the Hardy space, the exact
reduced ODE on the rank-one rational manifold, and the closed-form blow-up
solution issued from u0 = z + sqrt(alpha).
"""

from .hardy import (
    ConservedTriple,
    HardyCoeffs,
    autocorrelation,
    cubic_nonlinearity,
    energy_alpha,
    evaluate,
    inner_product,
    momentum,
    norm_hs,
    norm_l2,
    norm_l4,
    norm_wiener,
    szego_project,
)
from .hankel import (
    AntilinearHankel,
    LinearOperator,
    hankel_matrix,
    ku2_spectrum,
    lax_operators,
    numerical_rank,
    random_rational,
    rational_taylor,
    shifted_hankel_matrix,
    toeplitz_abs_squared,
    toeplitz_matrix,
    verify_hpi,
    verify_k_square,
)
from .reduced import (
    L1State,
    blowup_discriminant,
    conserved,
    exact_solution,
    log_c_rate_squared,
    reduced_rhs,
    sobolev_norm,
    sobolev_proxy,
    to_fourier,
    wiener_norm,
)
from .dynamics import (
    IntegratorConfig,
    Trajectory,
    TrajectoryRecord,
    exact_trajectory,
    full_rhs,
    integrate_full,
    integrate_reduced,
)
from .diagnostics import (
    GrowthFit,
    WienerTrack,
    boundedness_certificate,
    concentration_profile,
    dominant_mode,
    fit_growth,
    wiener_track,
)

__version__ = "0.1.0"

__all__ = [
    "ConservedTriple",
    "HardyCoeffs",
    "autocorrelation",
    "cubic_nonlinearity",
    "energy_alpha",
    "evaluate",
    "inner_product",
    "momentum",
    "norm_hs",
    "norm_l2",
    "norm_l4",
    "norm_wiener",
    "szego_project",
    "AntilinearHankel",
    "LinearOperator",
    "hankel_matrix",
    "ku2_spectrum",
    "lax_operators",
    "numerical_rank",
    "random_rational",
    "rational_taylor",
    "shifted_hankel_matrix",
    "toeplitz_abs_squared",
    "toeplitz_matrix",
    "verify_hpi",
    "verify_k_square",
    "L1State",
    "blowup_discriminant",
    "conserved",
    "exact_solution",
    "log_c_rate_squared",
    "reduced_rhs",
    "sobolev_norm",
    "sobolev_proxy",
    "to_fourier",
    "wiener_norm",
    "IntegratorConfig",
    "Trajectory",
    "TrajectoryRecord",
    "exact_trajectory",
    "full_rhs",
    "integrate_full",
    "integrate_reduced",
    "GrowthFit",
    "WienerTrack",
    "boundedness_certificate",
    "concentration_profile",
    "dominant_mode",
    "fit_growth",
    "wiener_track",
]

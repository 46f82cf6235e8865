"""Finite-volume / finite-difference solvers for the coupled
short-wave--long-wave system: a cubic Schrödinger equation driven by, and
driving, a scalar hyperbolic conservation law.
"""

__version__ = "0.1.0"

from swlw.core import (
    ConfigurationError,
    CutoffCoupling,
    Grid,
    InvariantViolation,
    ProblemSpec,
    State,
    StepFailure,
    eval_cutoff_g,
    project_initial_data,
)
from swlw.diagnostics import (
    DiagnosticsRecord,
    EntropyFluxCache,
    boundary_monitor,
    discrete_norm,
    energy,
    entropy_residual,
    gns_ratios,
    quadratic_total_variation_increment,
    viscosity_sum,
)
from swlw.exact import (
    StudyRow,
    TravelingWaveParams,
    convergence_study,
    general_case_data,
    linear_tw_problem,
    nonlinear_tw_problem,
)
from swlw.fluxes import (
    AxiomResult,
    CertificationReport,
    CombinedFlux,
    GodunovFlux,
    LaxFriedrichsFlux,
    NumericalFlux,
    auto_lf_parameters,
    certify_flux,
    viscosity,
)
from swlw.semidiscrete import SemiDiscreteRHS, forward_difference
from swlw.stepper import (
    Stepper,
    StepperConfig,
    TridiagonalSystem,
    solve_tridiagonal,
)

__all__ = [
    "__version__",
    "AxiomResult",
    "CertificationReport",
    "CombinedFlux",
    "ConfigurationError",
    "CutoffCoupling",
    "DiagnosticsRecord",
    "EntropyFluxCache",
    "GodunovFlux",
    "Grid",
    "InvariantViolation",
    "LaxFriedrichsFlux",
    "NumericalFlux",
    "ProblemSpec",
    "SemiDiscreteRHS",
    "State",
    "StepFailure",
    "Stepper",
    "StepperConfig",
    "StudyRow",
    "TravelingWaveParams",
    "TridiagonalSystem",
    "auto_lf_parameters",
    "boundary_monitor",
    "certify_flux",
    "convergence_study",
    "discrete_norm",
    "energy",
    "entropy_residual",
    "eval_cutoff_g",
    "forward_difference",
    "general_case_data",
    "gns_ratios",
    "linear_tw_problem",
    "nonlinear_tw_problem",
    "project_initial_data",
    "quadratic_total_variation_increment",
    "solve_tridiagonal",
    "viscosity",
    "viscosity_sum",
]

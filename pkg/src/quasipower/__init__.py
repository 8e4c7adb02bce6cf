"""Numerical verification toolkit for multivariate quasi-power limit theorems."""
from .berry_esseen import (BoundReport, QuadConfig, corollary_bound, integral_term, sup_cdf_distance,
                           theorem2_rhs, verify_bound)
from .gaussian import GaussianSpec, derivative_bound_A, gaussian_cdf, gaussian_charfn, marginal
from .lambda_operator import CharEvaluator, gamkrelidze_L, inject_chi, lambda_apply, lambda_quotient, project_psi
from .lattice import LatticeDistribution
from .partition_lattice import (SetPartition, enumerate_partitions, fubini_number, is_refinement, meet,
                                moebius_coefficient, weisner_sum)
from .quasi_power import (PowerSeries, QuasiPowerModel, lattice_charfn, mean_cov, moment_polynomial, rate_experiment,
                          series_exp, series_log, series_product, standardize)
from .smoothing_kernel import KernelConstants, charfn_phi_P, density_f_P, kernel_Q_charfn, solve_lambda

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "QuadConfig", "corollary_bound", "integral_term", "sup_cdf_distance", "theorem2_rhs",
    "verify_bound", "GaussianSpec", "derivative_bound_A", "gaussian_cdf", "gaussian_charfn", "marginal",
    "CharEvaluator", "gamkrelidze_L", "inject_chi", "lambda_apply", "lambda_quotient", "project_psi",
    "LatticeDistribution", "SetPartition", "enumerate_partitions", "fubini_number", "is_refinement", "meet",
    "moebius_coefficient", "weisner_sum", "PowerSeries", "QuasiPowerModel", "lattice_charfn", "mean_cov",
    "moment_polynomial", "rate_experiment", "series_exp", "series_log", "series_product", "standardize",
    "KernelConstants", "charfn_phi_P", "density_f_P", "kernel_Q_charfn", "solve_lambda", "__version__",
]

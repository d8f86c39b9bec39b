"""Explicit positive solutions and interval capacities of the G-heat equation.

The package evaluates the singular-weight special function phi and its
derivatives, locates the per-lambda critical constants, glues the explicit
positive solutions of the max-form ODE, cross-validates them against a
monotone finite-difference solve of d_t u = G(d^2_xx u), and brackets the
capacity of shrinking intervals tightly enough to recover its sharp order
2*lambda(sigma) numerically.
"""

from .capacity import (CapacityReport, OrderFit, capacity_lower_bound_widened,
                       capacity_report, capacity_sandwich,
                       capacity_time_scaling_check, capacity_upper_bound,
                       order_fit, ramp, sandwich_estimate)
from .critical_points import (CriticalPoints, SigmaParam, critical_points,
                              find_x1, find_x2, find_z, find_z2_diagnostic,
                              lambda_of_sigma, sigma_lambda_table,
                              sigma_of_lambda)
from .crosscheck import convergence_order, pde_verify, tabulated_H
from .errors import (BracketFailure, ConsistencyFailure, DegenerateInterval,
                     FitDegenerate, GHeatError, InvalidGrid, InvalidParameter,
                     NonConvergent, QuadratureFailure, RangeError,
                     RangeWarning, ScanExhausted, UnstableDetected)
from .pde_solver import (GridSolution, GridSpec, g_expectation, scaling_check,
                         solve_gheat, solve_gheat_many)
from .quadrature import (DEFAULT_CONFIG, IntegralResult, QuadratureConfig,
                         moment_integral, moment_integrals)
from .solutions import (PiecewiseSolution, build_H, build_P, eval_H,
                        eval_self_similar, heat_check_sigma1, ode_residual)
from .special_functions import (LambdaParam, PhiEval, PsiCoefficients, phi,
                                phi_bundle, phi_d1, phi_d2, phi_d3, psi)

__version__ = "0.1.0"

__all__ = [
    "BracketFailure", "CapacityReport", "ConsistencyFailure", "CriticalPoints",
    "DEFAULT_CONFIG", "DegenerateInterval", "FitDegenerate", "GHeatError",
    "GridSolution", "GridSpec", "IntegralResult", "InvalidGrid",
    "InvalidParameter", "LambdaParam", "NonConvergent", "OrderFit", "PhiEval",
    "PiecewiseSolution", "PsiCoefficients", "QuadratureConfig",
    "QuadratureFailure", "RangeError", "RangeWarning", "ScanExhausted",
    "SigmaParam", "UnstableDetected", "build_H", "build_P",
    "capacity_lower_bound_widened", "capacity_report", "capacity_sandwich",
    "capacity_time_scaling_check", "capacity_upper_bound", "convergence_order",
    "critical_points", "eval_H", "eval_self_similar", "find_x1", "find_x2",
    "find_z", "find_z2_diagnostic", "g_expectation", "heat_check_sigma1",
    "lambda_of_sigma", "moment_integral", "moment_integrals", "ode_residual",
    "order_fit", "pde_verify", "phi", "phi_bundle", "phi_d1", "phi_d2",
    "phi_d3", "psi", "ramp", "sandwich_estimate", "scaling_check",
    "sigma_lambda_table", "sigma_of_lambda", "solve_gheat", "solve_gheat_many",
    "tabulated_H",
]

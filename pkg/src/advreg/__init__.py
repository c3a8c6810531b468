"""Finite element study of viscous regularization for stationary advection equations.

Solves -eps*Lap(u) + beta.grad(u) + mu*u = f on the unit square with a
homogeneous Dirichlet condition on the inflow boundary and a natural Neumann
condition elsewhere, then measures how fast the discrete solution approaches
the exact transport solution as eps shrinks.
"""

__version__ = "0.1.0"

from .mesh import BoundaryTag, Mesh, build_unit_square_mesh, classify_boundary
from .problems import Problem, alpha_of_s, coercivity_constant, expected_rate, registry_get
from .fem import DiscreteField, QuadratureRule, assemble, evaluate, peclet_guard, triangle_rule
from .solvers import SolveReport, solve_direct, solve_iterative
from .errors import (
    ErrorRecord,
    characteristic_error,
    h1_semi_error,
    l2_domain_error,
    weighted_outflow_error,
)
from .sweep import RateFit, SweepConfig, alpha_study, fit_rate, run_sweep

__all__ = [
    "BoundaryTag",
    "Mesh",
    "build_unit_square_mesh",
    "classify_boundary",
    "Problem",
    "registry_get",
    "coercivity_constant",
    "alpha_of_s",
    "expected_rate",
    "QuadratureRule",
    "triangle_rule",
    "DiscreteField",
    "assemble",
    "evaluate",
    "peclet_guard",
    "SolveReport",
    "solve_direct",
    "solve_iterative",
    "ErrorRecord",
    "l2_domain_error",
    "h1_semi_error",
    "weighted_outflow_error",
    "characteristic_error",
    "SweepConfig",
    "RateFit",
    "run_sweep",
    "fit_rate",
    "alpha_study",
]

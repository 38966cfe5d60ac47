"""Exact Wasserstein distances from a distribution to an algebraic statistical model."""
from .cells import CellProblem, PlanTemplate, cell_problem, plan_template
from .driver import CellReport, Optimum, PiecewiseReport, implicit_model_distance, model_distance
from .dual import (
    ELLIPTIC_CUBIC,
    PHI,
    CurveConfig,
    dual_residual,
    implicit_curve_min,
    wasserstein_degree_hypersurface,
)
from .errors import CapabilityError, NumericInfeasibleError, ValidationError
from .exact import QuadraticNumber, Rational, quad_compare, rat_normalize, to_rational
from .forms import AffineForm, Polynomial, poly_eval
from .models import ImplicitCurveModel, ParametricModel, compose_cell, hardy_weinberg, independence_2x2
from .optimize import Candidate, NumericConfig, minimize_cell_exact, minimize_cell_numeric
from .transport import (
    Distribution,
    GroundMetric,
    TransportPlan,
    discrete_metric,
    enumerate_vertices,
    hamming_metric_2bit,
    wasserstein,
)
from .trees import TreeSimplex, cycle_signs, enumerate_spanning_trees, reduced_cost, solve_tree
from .triangulation import (
    CycleInequality,
    SubdivisionCell,
    Triangulation,
    coarsen,
    dual_feasible_trees,
    regular_triangulation,
    secondary_cone,
    to_monomial_ideal,
    value_functional,
)

__all__ = [name for name in dir() if not name.startswith("_")]

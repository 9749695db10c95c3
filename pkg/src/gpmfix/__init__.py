"""Fixed points in generalized parametric metric spaces.

Check the axioms of a combine operation and a parametric metric by seeded
sampling, run Banach, Boyd-Wong and ordered successive approximation, and
solve a second-order initial value problem and a first-order periodic
problem as fixed points of integral operators on uniform grids.
"""

from . import kernels
from .axioms import CheckReport, Sampler, SplitMix64, Violation, check_combine_axioms, check_contraction, check_metric_axioms, check_order_axioms
from .fixpoint import (
    Banach,
    BoydWong,
    IncomparableStart,
    IterationTrace,
    NonFiniteError,
    NonMonotoneTrace,
    PartialOrderSpec,
    Status,
    estimate_contraction_factor,
    fixed_point_residual,
    iterate,
    limit_distance,
    ordered_iterate,
)
from .grid import GridDomain, GridFunction, join, leq, meet, pointwise_order, sup_distance, sup_parametric_metric
from .ivp import IVPProblem, apply_ivp_operator, check_ivp_condition, greens_ivp, ode_residual, solve_ivp
from .metric import MAX, SUM, CombineOp, DomainError, GaugeFunction, ParametricMetric, combine, linear_gauge, power_metric, sqrt_metric
from .pbvp import PBVPProblem, apply_pbvp_operator, check_F_condition, greens_periodic, pbvp_residual, solve_pbvp, verify_lower_solution, verify_upper_solution

__version__ = "0.1.0"

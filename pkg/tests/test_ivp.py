import math

import numpy as np
import pytest

from gpmfix.axioms import Sampler
from gpmfix.grid import GridFunction
from gpmfix.ivp import CONSISTENT, VERBATIM, IVPProblem, apply_ivp_operator, check_ivp_condition, greens_ivp, ode_residual, solve_ivp
from gpmfix.metric import DomainError, GaugeFunction, linear_gauge


def zero(x, y):
    return 0.0 * x


def test_validation():
    with pytest.raises(DomainError):
        IVPProblem(0.0, 0, 0, 1.0, zero)
    with pytest.raises(DomainError):
        IVPProblem(1.0, 0, 0, -1.0, zero)
    with pytest.raises(DomainError):
        IVPProblem(1.0, 0, 0, 1.0, zero, n=1)
    with pytest.raises(DomainError):
        IVPProblem(1.0, 0, 0, 1.0, zero, homogeneous_mode="other")


def test_greens_ivp():
    assert greens_ivp(1.0, 0.5, 2.0) == pytest.approx(math.sin(1.0) / 2)
    assert greens_ivp(0.5, 1.0, 2.0) == 0.0
    assert np.allclose(greens_ivp(1.0, np.array([0.0, 2.0]), 1.0), [math.sin(1.0), 0.0])


@pytest.mark.parametrize("w", [0.5, 1.0, 1.4])
def test_homogeneous_modes(w):
    p = IVPProblem(w, 1.0, 2.0, 1.0, zero, n=200)
    y = p.nodes
    assert np.allclose(p.homogeneous().values, np.cos(w * y) + 2 / w * np.sin(w * y))
    v = IVPProblem(w, 1.0, 2.0, 1.0, zero, n=200, homogeneous_mode=VERBATIM)
    assert np.allclose(v.homogeneous().values, np.cos(w * y) + 2 * np.sin(w * y))


def test_verbatim_breaks_initial_slope_for_w_not_one():
    w = 0.5
    cons = IVPProblem(w, 0.0, 1.0, 1.0, zero, n=1000)
    verb = IVPProblem(w, 0.0, 1.0, 1.0, zero, n=1000, homogeneous_mode=VERBATIM)
    Yc, _ = solve_ivp(cons)
    Yv, _ = solve_ivp(verb)
    assert ode_residual(cons, Yc).initial_slope < 1e-5
    assert ode_residual(verb, Yv).initial_slope > 0.4


def test_guard_warning():
    p = IVPProblem(2.0, 0.0, 0.0, 1.0, zero, n=100)
    assert p.contraction_guard() is not None
    _, tr = solve_ivp(p)
    assert tr.metadata["warnings"]
    ok = IVPProblem(1.0, 0.0, 0.0, 1.0, zero, n=100)
    assert ok.contraction_guard() is None


def test_operator_is_exact_on_fixed_point_of_linear_problem():
    # Y'' + Y = 1 with zero data: Y = 1 - cos y; operator leaves the sampled
    # exact solution fixed up to trapezoid error
    p = IVPProblem(1.0, 0.0, 0.0, 1.0, lambda x, y: 1.0 + 0.0 * x, n=2000)
    Y = GridFunction.from_callable(lambda y: 1 - np.cos(y), 1.0, 2000)
    assert np.max(np.abs(apply_ivp_operator(p, Y).values - Y.values)) < 1e-7


def test_condition_check_fails_for_too_steep_forcing():
    steep = IVPProblem(1.0, 0, 0, 1.0, lambda x, y: 3 * y, linear_gauge(0.5), n=100)
    assert not check_ivp_condition(steep, Sampler(n=200)).passed


def test_condition_requires_gauge():
    with pytest.raises(DomainError):
        check_ivp_condition(IVPProblem(1.0, 0, 0, 1.0, zero), Sampler(n=10))


def test_nonlinear_forcing_converges():
    # g = 0.4 sin(Y) has Lipschitz constant 0.4 <= w^2 * 0.5
    g = lambda x, y: 0.4 * np.sin(y) + 1.0  # noqa: E731
    p = IVPProblem(1.0, 0.5, 0.0, 1.0, g, GaugeFunction(lambda s: 0.5 * s), n=1000)
    assert check_ivp_condition(p, Sampler(n=300)).passed
    Y, tr = solve_ivp(p)
    assert tr.converged
    assert ode_residual(p, Y).interior < 1e-4


def test_grid_mismatch():
    p = IVPProblem(1.0, 0, 0, 1.0, zero, n=10)
    with pytest.raises(DomainError):
        apply_ivp_operator(p, GridFunction.constant(0, 1.0, 20))
    with pytest.raises(DomainError):
        solve_ivp(p, GridFunction.constant(0, 1.0, 20))


def test_residuals_follow_gauge():
    # r[n+1] <= phi(r[n]) + quadrature slack once the condition holds and w S <= pi/2
    p = IVPProblem(1.0, 0.0, 0.0, 1.0, lambda x, y: 2 + x**2 + 0.5 * (y - x**2), linear_gauge(0.5), n=1000)
    _, tr = solve_ivp(p, GridFunction.constant(3.0, 1.0, 1000), tol=1e-12)
    r = tr.residuals
    assert np.all(r[1:] <= 0.5 * r[:-1] + 1e-12)


def test_operator_fixes_manufactured_solution():
    p = IVPProblem(1.0, 0.0, 0.0, 1.0, lambda x, y: 2 + x**2 + 0.5 * (y - x**2), linear_gauge(0.5), n=1000)
    Y = GridFunction.from_callable(lambda y: y**2, 1.0, 1000)
    assert np.max(np.abs(apply_ivp_operator(p, Y).values - Y.values)) <= 1e-6

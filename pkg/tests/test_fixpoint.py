import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpmfix.fixpoint import (
    Banach,
    BoydWong,
    IncomparableStart,
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
from gpmfix.metric import DomainError, linear_gauge, power_metric, sqrt_metric

SCALAR_ORDER = PartialOrderSpec(lambda a, b: a <= b, min, max)


def test_banach_validation():
    with pytest.raises(DomainError):
        Banach(1.0)
    with pytest.raises(DomainError):
        Banach(-0.1)
    assert Banach(0.5).bound(2.0) == 1.0
    assert BoydWong(linear_gauge(0.25)).bound(4.0) == 1.0


def test_trace_shape_and_status():
    tr = iterate(lambda x: 0.5 * x + 1, 0.0, sqrt_metric(), (0.5, 1.0), tol=1e-12)
    assert tr.status is Status.CONVERGED
    assert tr.final == pytest.approx(2.0, abs=1e-12)
    assert tr.residuals.shape == (tr.iterations, 2)
    assert len(tr.iterates) == tr.iterations + 1
    assert tr.converged_at == tr.iterations - 1


def test_max_iterations_status():
    tr = iterate(lambda x: 0.99 * x, 1.0, sqrt_metric(), tol=1e-14, max_iter=5)
    assert tr.status is Status.MAX_ITERATIONS and tr.iterations == 5


def test_divergence_reported_non_finite():
    tr = iterate(lambda x: 10 * x + 1, 1.0, sqrt_metric(), tol=1e-10, max_iter=100)
    assert tr.status is Status.NON_FINITE


def test_map_error_reported_non_finite():
    def bad(x):
        raise NonFiniteError("boom")

    assert iterate(bad, 1.0, sqrt_metric()).status is Status.NON_FINITE
    assert iterate(lambda x: math.nan, 1.0, sqrt_metric()).status is Status.NON_FINITE


def test_argument_validation():
    for kw in ({"t_grid": ()}, {"t_grid": (0.0,)}, {"tol": 0.0}, {"max_iter": 0}):
        with pytest.raises(DomainError):
            iterate(lambda x: x / 2, 1.0, sqrt_metric(), **kw)


@given(st.floats(0.05, 0.95), st.floats(-100, 100).filter(lambda v: abs(v) > 1e-3))
def test_residuals_nonincreasing_for_banach_maps(kappa, x0):
    tr = iterate(lambda x: kappa * x, x0, power_metric(0.5), tol=1e-9)
    r = tr.residuals
    assert np.all(r[1:] <= r[:-1])


def test_estimate_contraction_factor():
    tr = iterate(lambda x: 0.3 * x, 1.0, power_metric(0.5), tol=1e-12)
    assert estimate_contraction_factor(tr) == pytest.approx(math.sqrt(0.3), rel=1e-9)
    short = iterate(lambda x: 0.0, 1.0, sqrt_metric())
    with pytest.raises(ValueError):
        estimate_contraction_factor(short)


def test_fixed_point_residual_and_limit_distance():
    m = sqrt_metric()
    assert fixed_point_residual(lambda x: 0.5 * x + 1, 2.0, m) == 0.0
    a = iterate(lambda x: 0.5 * x + 1, 0.0, m, tol=1e-14)
    b = iterate(lambda x: 0.5 * x + 1, 10.0, m, tol=1e-14)
    assert limit_distance(a, b, m) < 1e-6


def test_trace_serialization(tmp_path):
    tr = iterate(lambda x: x / 4, 1.0, sqrt_metric(), (1.0, 2.0))
    text = tr.to_csv(tmp_path / "t.csv")
    assert text.splitlines()[0] == "n,t=1,t=2"
    assert (tmp_path / "t.csv").read_text() == text
    d = json.loads(tr.to_json())
    assert d["status"] == "converged" and len(d["iterates"]) == len(tr.iterates)


def test_ordered_iterate_directions():
    T = lambda x: 0.5 * x + 1  # noqa: E731
    up = ordered_iterate(T, 0.0, SCALAR_ORDER, sqrt_metric())
    down = ordered_iterate(T, 5.0, SCALAR_ORDER, sqrt_metric())
    flat = ordered_iterate(T, 2.0, SCALAR_ORDER, sqrt_metric())
    assert (up.direction, down.direction, flat.direction) == ("up", "down", "flat")
    assert up.monotone and down.monotone


def test_ordered_iterate_incomparable():
    never = PartialOrderSpec(lambda a, b: False, min, max)
    with pytest.raises(IncomparableStart):
        ordered_iterate(lambda x: x / 2, 1.0, never, sqrt_metric())


def test_non_monotone_trace():
    # 1 -> 0.5 -> -0.25 starts downward, then -0.25 -> 0.125 goes up
    T = lambda x: -0.5 * x + (0.0 if x < 1.0 else 1.0)  # noqa: E731
    tr = ordered_iterate(T, 1.0, SCALAR_ORDER, sqrt_metric())
    assert not tr.monotone
    step = tr.metadata["first_non_monotone_step"]
    with pytest.raises(NonMonotoneTrace) as exc:
        ordered_iterate(T, 1.0, SCALAR_ORDER, sqrt_metric(), require_monotone_trace=True)
    assert exc.value.trace.iterations == step + 1

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpmfix.axioms import Sampler, check_metric_axioms
from gpmfix.metric import (
    MAX,
    SUM,
    CombineOp,
    DomainError,
    ParametricMetric,
    combine,
    eval_metric,
    linear_gauge,
    power_metric,
    sqrt_metric,
)

nonneg = st.floats(0, 1e6, allow_nan=False)
reals = st.floats(-1e3, 1e3, allow_nan=False)
pos = st.floats(1e-3, 1e3, allow_nan=False)


def test_combine_values():
    assert combine(MAX, 2.0, 3.0) == 3.0
    assert combine(SUM, 2.0, 3.0) == 5.0
    assert MAX(1.0, 0.0) == 1.0


@pytest.mark.parametrize("bad", [(-1.0, 1.0), (1.0, math.inf), (math.nan, 0.0)])
def test_combine_rejects_bad_inputs(bad):
    with pytest.raises(DomainError):
        combine(SUM, *bad)


def test_custom_combine_bad_result_raises():
    op = CombineOp.custom(lambda a, b: a - b - 10, "neg")
    with pytest.raises(DomainError):
        combine(op, 1.0, 2.0)


@given(nonneg, nonneg)
def test_max_sum_commute(a, b):
    assert combine(MAX, a, b) == combine(MAX, b, a)
    assert combine(SUM, a, b) == combine(SUM, b, a)


def test_power_metric_domain():
    assert power_metric(0.5)(0.0, 4.0, 2.0) == pytest.approx(1.0)
    for p in (0.0, 1.0, 1.5, -0.1):
        with pytest.raises(DomainError):
            power_metric(p)


def test_eval_metric_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        eval_metric(sqrt_metric(), 0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        eval_metric(sqrt_metric(), 0.0, 1.0, -1.0)


def test_eval_metric_rejects_non_scalar_point():
    with pytest.raises(DomainError):
        eval_metric(sqrt_metric(), "a", 1.0, 1.0)


@given(reals, reals, reals, pos, pos)
def test_sqrt_split_triangle(x, y, z, t1, t2):
    m = sqrt_metric()
    lhs = m(x, y, t1 + t2)
    rhs = m(x, z, t1) + m(y, z, t2)
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


@given(reals, reals, pos, pos)
def test_t_monotone(x, y, t1, t2):
    m = power_metric(0.5)
    lo, hi = sorted((t1, t2))
    assert m(x, y, hi) <= m(x, y, lo) * (1 + 1e-15)


def test_squared_distance_with_sum_passes():
    # |x-y|^2/t satisfies the split triangle with Sum (Titu / Cauchy-Schwarz)
    sq = ParametricMetric(lambda x, y, t: (x - y) ** 2 / t, SUM, name="sq")
    assert check_metric_axioms(sq, Sampler(n=2000), tol=1e-12).passed


def test_squared_distance_with_max_fails_with_witness():
    sq = ParametricMetric(lambda x, y, t: (x - y) ** 2 / t, MAX, name="sq_max")
    # explicit witness: x=0, y=2, z=1, t1=t2=1 gives 2 > max(1, 1)
    assert sq(0.0, 2.0, 2.0) > combine(MAX, sq(0.0, 1.0, 1.0), sq(2.0, 1.0, 1.0))
    rep = check_metric_axioms(sq, Sampler(n=2000))
    assert not rep.passed
    assert rep.parts["rho3"].violations


def test_linear_gauge():
    g = linear_gauge(0.5)
    assert g(2.0) == 1.0
    with pytest.raises(DomainError):
        linear_gauge(1.0)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gpmfix.grid import GridDomain, GridFunction, eval_interp, join, leq, leq_eps, meet, pointwise_order, sup_distance, sup_parametric_metric
from gpmfix.metric import DomainError

vals = arrays(float, st.integers(3, 40), elements=st.floats(-1e6, 1e6, allow_nan=False))


def test_immutable():
    f = GridFunction.constant(1.0, 1.0, 4)
    with pytest.raises(AttributeError):
        f.s_max = 2.0
    with pytest.raises(ValueError):
        f.values[0] = 3.0


def test_constructor_validation():
    with pytest.raises(DomainError):
        GridFunction(1.0, [1.0, 2.0])
    with pytest.raises(DomainError):
        GridFunction(0.0, [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        GridFunction(1.0, [1.0, np.nan, 3.0])


def test_from_callable_and_nodes():
    f = GridFunction.from_callable(lambda y: y**2, 2.0, 4)
    assert np.allclose(f.nodes, [0, 0.5, 1, 1.5, 2])
    assert np.allclose(f.values, f.nodes**2)
    assert f.h == 0.5 and f.grid == (2.0, 4)


@given(vals)
def test_csv_round_trip_bit_exact(v):
    f = GridFunction(3.0, v)
    g = GridFunction.parse_csv(f.to_csv())
    assert g == f


@given(vals)
def test_json_round_trip(v):
    f = GridFunction(1.5, v)
    assert GridFunction.from_json_dict(f.to_json_dict()) == f


def test_csv_file_round_trip(tmp_path):
    f = GridFunction.from_callable(np.sin, 1.0, 10)
    f.to_csv(tmp_path / "f.csv")
    assert GridFunction.from_csv(tmp_path / "f.csv") == f


def test_csv_rejects_nonuniform():
    with pytest.raises(DomainError):
        GridFunction.parse_csv("y,value\n0,1\n0.2,1\n1,1\n")


@given(vals, vals)
def test_meet_join_bounds(a, b):
    n = min(a.size, b.size)
    f, g = GridFunction(1.0, a[:n]), GridFunction(1.0, b[:n])
    lo, hi = meet(f, g), join(f, g)
    assert leq(lo, f) and leq(lo, g) and leq(f, hi) and leq(g, hi)
    assert sup_distance(lo, hi) == sup_distance(f, g)


def test_grid_mismatch_rejected():
    with pytest.raises(DomainError):
        sup_distance(GridFunction.constant(0, 1.0, 4), GridFunction.constant(0, 1.0, 5))
    with pytest.raises(DomainError):
        leq(GridFunction.constant(0, 1.0, 4), GridFunction.constant(0, 2.0, 4))


def test_leq_eps():
    f = GridFunction.constant(1.0, 1.0, 4)
    g = GridFunction.constant(1.0 - 1e-10, 1.0, 4)
    assert not leq(f, g)
    assert leq_eps(1e-9)(f, g)


def test_sup_metric_values():
    m = sup_parametric_metric(1.0, 4)
    f = GridFunction(1.0, [0, 1, 2, 3, 4])
    g = GridFunction(1.0, [0, 1, 5, 3, 4])
    assert m(f, g, 2.0) == 1.5
    assert not m.domain.contains(GridFunction.constant(0, 1.0, 5))


def test_eval_interp_exact_at_nodes_and_linear_between():
    f = GridFunction.from_callable(lambda y: 3 * y + 1, 1.0, 10)
    assert eval_interp(f, 0.3) == f.values[3]
    assert eval_interp(f, 0.35) == pytest.approx(2.05)
    with pytest.raises(DomainError):
        eval_interp(f, 1.5)


def test_domain_random_point():
    d = GridDomain(2.0, 8)
    rng = np.random.default_rng(0)
    p = d.random_point(rng.random, -1.0, 1.0)
    assert d.contains(p) and p.grid == (2.0, 8)


def test_pointwise_order_checks_grid():
    order = pointwise_order(1.0, 4)
    f = GridFunction.constant(0, 1.0, 4)
    assert order.leq(f, f)
    with pytest.raises(DomainError):
        order.leq(f, GridFunction.constant(0, 1.0, 6))

"""Successive approximation ``x_{n+1} = T(x_n)`` with per-``t`` residual traces.

Convergence in a parametric metric space is a statement about every ``t > 0``;
here it is declared on a finite grid of ``t`` values.  Every built-in metric
scales like ``1/t``, so the smallest grid entry dominates and a finite grid is
enough for them.  For other metrics the choice of grid is the caller's
responsibility.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from numbers import Real
from typing import Any, Callable, Sequence, Union

import numpy as np

from .metric import DomainError, GaugeFunction, ParametricMetric, eval_metric

DEFAULT_T_GRID = (0.5, 1.0, 2.0)
DEFAULT_TOL_SCALAR = 1e-10
DEFAULT_TOL_FUNCTION = 1e-8
DEFAULT_MAX_ITER = 10_000
DIVERGENCE_THRESHOLD = 1e12


class NonFiniteError(ArithmeticError):
    """A map produced a non-finite value."""


class IncomparableStart(ValueError):
    """Neither ``x0 <= T(x0)`` nor ``T(x0) <= x0`` holds."""


class NonMonotoneTrace(RuntimeError):
    """The iterates left the monotone chain started by ``x0``."""

    def __init__(self, message: str, trace: "IterationTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Banach:
    """``rho(Tx, Ty, t) <= kappa * rho(x, y, t)`` with ``0 <= kappa < 1``."""

    kappa: float

    def __post_init__(self):
        if not isinstance(self.kappa, Real) or not 0 <= self.kappa < 1:
            raise DomainError(f"kappa must lie in [0, 1), got {self.kappa!r}")

    def bound(self, s: float) -> float:
        return self.kappa * s


@dataclass(frozen=True)
class BoydWong:
    """``rho(Tx, Ty, t) <= phi(rho(x, y, t))`` for a gauge ``phi``."""

    gauge: GaugeFunction

    def bound(self, s: float) -> float:
        return self.gauge(s)


ContractionSpec = Union[Banach, BoydWong]


@dataclass(frozen=True)
class PartialOrderSpec:
    leq: Callable[[Any, Any], bool]
    meet: Callable[[Any, Any], Any]
    join: Callable[[Any, Any], Any]


class Status(Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    NON_FINITE = "non_finite"


@dataclass
class IterationTrace:
    """Record of one successive-approximation run.

    ``residuals[n, j]`` is ``rho(x_n, x_{n+1}, t_grid[j])``; ``iterates`` holds
    ``x_0 .. x_{k}`` where ``k`` is the number of rows.  When ``status`` is
    CONVERGED, ``converged_at`` is the row whose sup fell below ``tol``.
    """

    iterates: list
    residuals: np.ndarray
    t_grid: tuple[float, ...]
    status: Status
    tol: float
    converged_at: int | None = None
    monotone: bool | None = None
    direction: str | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def final(self):
        return self.iterates[-1]

    @property
    def iterations(self) -> int:
        """Number of map applications that produced a finite iterate."""
        return len(self.iterates) - 1

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def sup_residuals(self) -> np.ndarray:
        if self.residuals.size == 0:
            return np.zeros(0)
        return self.residuals.max(axis=1)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [f"t={format(t, '.17g')}" for t in self.t_grid])
        for n, row in enumerate(self.residuals):
            w.writerow([n] + [format(float(v), ".17g") for v in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_json_dict(self, include_iterates: bool = True) -> dict:
        d = {
            "status": self.status.value,
            "converged_at": self.converged_at,
            "iterations": self.iterations,
            "tol": self.tol,
            "t_grid": list(self.t_grid),
            "residuals": self.residuals.tolist(),
            "monotone": self.monotone,
            "direction": self.direction,
            "metadata": self.metadata,
        }
        if include_iterates:
            d["iterates"] = [_point_json(x) for x in self.iterates]
        return d

    def to_json(self, include_iterates: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_iterates))


def _point_json(x):
    if hasattr(x, "to_json_dict"):
        return x.to_json_dict()
    return float(x)


def _is_finite_point(x) -> bool:
    if isinstance(x, Real):
        return math.isfinite(x)
    vals = getattr(x, "values", None)
    if vals is not None:
        return bool(np.all(np.isfinite(vals)))
    return True


def _check_args(t_grid: Sequence[float], tol: float, max_iter: int) -> tuple[float, ...]:
    t_grid = tuple(float(t) for t in t_grid)
    if not t_grid:
        raise DomainError("t_grid must be nonempty")
    if any(not (t > 0 and math.isfinite(t)) for t in t_grid):
        raise DomainError(f"t_grid entries must be positive, got {t_grid}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if int(max_iter) != max_iter or max_iter < 1:
        raise DomainError(f"max_iter must be a positive integer, got {max_iter}")
    return t_grid


def _apply(map_, x):
    try:
        y = map_(x)
    except (NonFiniteError, OverflowError, FloatingPointError, ZeroDivisionError):
        return None
    return y if _is_finite_point(y) else None


def _run(map_, x0, m, t_grid, tol, max_iter, first_image=None, step_check=None):
    xs = [x0]
    rows = []
    status = Status.MAX_ITERATIONS
    converged_at = None
    x = x0
    y = first_image
    for n in range(int(max_iter)):
        if y is None:
            y = _apply(map_, x)
        if y is None:
            status = Status.NON_FINITE
            break
        try:
            row = [eval_metric(m, x, y, t) for t in t_grid]
        except DomainError:
            # points valid but the distance overflowed
            if m.domain.contains(x) and m.domain.contains(y):
                status = Status.NON_FINITE
                break
            raise
        xs.append(y)
        rows.append(row)
        if step_check is not None and not step_check(x, y):
            break
        worst = max(row)
        if not math.isfinite(worst) or worst > DIVERGENCE_THRESHOLD:
            status = Status.NON_FINITE
            break
        if worst <= tol:
            status = Status.CONVERGED
            converged_at = n
            break
        x, y = y, None
    residuals = np.array(rows, dtype=float).reshape(len(rows), len(t_grid))
    return IterationTrace(xs, residuals, t_grid, status, tol, converged_at)


def iterate(
    map_: Callable,
    x0,
    m: ParametricMetric,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    tol: float = DEFAULT_TOL_SCALAR,
    max_iter: int = DEFAULT_MAX_ITER,
) -> IterationTrace:
    """Iterate ``map_`` from ``x0`` until ``max_j rho(x_n, x_{n+1}, t_j) <= tol``.

    The run stops with status NON_FINITE when an iterate is not finite or a
    residual exceeds ``1e12``; Boyd-Wong hypotheses are not verified here.
    """
    t_grid = _check_args(t_grid, tol, max_iter)
    return _run(map_, x0, m, t_grid, tol, max_iter)


def fixed_point_residual(map_: Callable, x, m: ParametricMetric, t_grid: Sequence[float] = DEFAULT_T_GRID) -> float:
    """``max_j rho(x, T(x), t_j)``; zero exactly when ``x`` is a fixed point on the grid."""
    t_grid = _check_args(t_grid, 1.0, 1)
    y = map_(x)
    if not _is_finite_point(y):
        raise NonFiniteError(f"map returned a non-finite value at {x!r}")
    return max(eval_metric(m, x, y, t) for t in t_grid)


def ordered_iterate(
    map_: Callable,
    x0,
    order: PartialOrderSpec,
    m: ParametricMetric,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    tol: float = DEFAULT_TOL_SCALAR,
    max_iter: int = DEFAULT_MAX_ITER,
    require_monotone_trace: bool = False,
) -> IterationTrace:
    """Iterate from a start comparable with its image and track monotonicity.

    ``x0`` must satisfy ``x0 <= T(x0)`` or ``T(x0) <= x0``.  The trace records
    whether every step kept that direction.  With ``require_monotone_trace`` a
    broken chain raises :class:`NonMonotoneTrace` (carrying the partial trace);
    this stands in for continuity of ``T``, which is not checkable.

    Raises:
        IncomparableStart: if ``x0`` and ``T(x0)`` are incomparable.
    """
    t_grid = _check_args(t_grid, tol, max_iter)
    y0 = _apply(map_, x0)
    if y0 is None:
        raise NonFiniteError("map returned a non-finite value at the start point")
    up = order.leq(x0, y0)
    down = order.leq(y0, x0)
    if not (up or down):
        raise IncomparableStart("start point is not comparable with its image")
    direction = "flat" if (up and down) else ("up" if up else "down")
    state = {"monotone": True, "first_break": None, "step": 0}

    def step_check(x, y):
        if direction == "up":
            ok = order.leq(x, y)
        elif direction == "down":
            ok = order.leq(y, x)
        else:
            ok = order.leq(x, y) and order.leq(y, x)
        if not ok and state["monotone"]:
            state["monotone"] = False
            state["first_break"] = state["step"]
        state["step"] += 1
        return ok or not require_monotone_trace

    trace = _run(map_, x0, m, t_grid, tol, max_iter, first_image=y0, step_check=step_check)
    trace.monotone = state["monotone"]
    trace.direction = direction
    if state["first_break"] is not None:
        trace.metadata["first_non_monotone_step"] = state["first_break"]
        if require_monotone_trace:
            raise NonMonotoneTrace(
                f"iterates stopped being monotone ({direction}) at step {state['first_break']}", trace
            )
    return trace


def estimate_contraction_factor(trace: IterationTrace, column: int = 0) -> float:
    """Geometric-mean ratio of successive residuals at ``t_grid[column]``.

    Uses the leading run of nonzero residuals, which must have length >= 3.
    """
    r = trace.residuals[:, column] if trace.residuals.size else np.zeros(0)
    k = 0
    while k < r.size and r[k] > 0:
        k += 1
    if k < 3:
        raise ValueError(f"need at least 3 nonzero residuals to estimate a factor, got {k}")
    return float((r[k - 1] / r[0]) ** (1.0 / (k - 1)))


def limit_distance(trace_a: IterationTrace, trace_b: IterationTrace, m: ParametricMetric) -> float:
    """``max_j rho(final_a, final_b, t_j)`` over the first trace's t-grid."""
    return max(eval_metric(m, trace_a.final, trace_b.final, t) for t in trace_a.t_grid)

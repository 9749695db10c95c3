"""First-order periodic problem ``u' = F(y, u)``, ``u(0) = u(S)``.

Adding ``a u`` to both sides gives ``u' + a u = F(y, u) + a u``, whose periodic
solution is the fixed point of

    (A u)(y) = int_0^S G(y, z) [F(z, u(z)) + a u(z)] dz

with the positive kernel

    G(y, z) = exp(a (S + z - y)) / (exp(a S) - 1)   for z < y
              exp(a (z - y))     / (exp(a S) - 1)   for z >= y.

If ``0 <= (F(y, r2) + a r2) - (F(y, r1) + a r1) <= b (r2 - r1)`` for
``r2 >= r1`` and ``b < a``, then ``A`` is order-preserving and contracts
comparable pairs with factor ``b / a`` in the sup metric.  A lower solution
``alpha`` (``alpha' <= F(y, alpha)``, ``alpha(0) <= alpha(S)``) satisfies
``alpha <= A alpha`` and starts a nondecreasing chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .axioms import DEFAULT_TOL, CheckReport, Sampler, _compose, _Part
from .fixpoint import (
    DEFAULT_MAX_ITER,
    DEFAULT_T_GRID,
    DEFAULT_TOL_FUNCTION,
    NonFiniteError,
    estimate_contraction_factor,
    ordered_iterate,
)
from .grid import DEFAULT_N, GridFunction, pointwise_order, sup_parametric_metric
from .metric import DomainError

PRODUCT = "product"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class PBVPProblem:
    """``u' = F(y, u)`` on ``[0, S]`` with ``u(0) = u(S)``.

    ``a`` is the shift and ``b`` the declared slope bound of ``F + a u``;
    ``b < a`` is required.  ``F`` is called with equal-shape numpy arrays.

    ``quadrature`` selects how the operator integrates the kernel:
    ``"product"`` (default) integrates it exactly against the piecewise-linear
    interpolant, ``"trapezoid"`` uses the composite trapezoid rule.  Both are
    split at ``z = y`` and second order; the product rule is exact on
    constants, the trapezoid rule is off by a relative ``(a h)^2 / 12``.
    """

    S: float
    a: float
    b: float
    F: Callable
    n: int = DEFAULT_N
    quadrature: str = PRODUCT

    def __post_init__(self):
        if self.quadrature not in (PRODUCT, TRAPEZOID):
            raise DomainError(f"quadrature must be {PRODUCT!r} or {TRAPEZOID!r}, got {self.quadrature!r}")
        for name in ("S", "a", "b"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive, got {v}")
        if not self.b < self.a:
            raise DomainError(f"need b < a for a contraction, got a={self.a}, b={self.b}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.S, int(self.n) + 1)

    @property
    def h(self) -> float:
        return self.S / self.n

    @property
    def kappa(self) -> float:
        return self.b / self.a


def greens_periodic(y: float, z: float, a: float, S: float) -> float:
    """Periodic Green's kernel; the tie ``z == y`` takes the ``z >= y`` branch."""
    if not (a > 0 and S > 0):
        raise DomainError(f"need a > 0 and S > 0, got a={a}, S={S}")
    if not (0 <= y <= S and 0 <= z <= S):
        raise DomainError(f"(y, z) = ({y}, {z}) outside [0, {S}]^2")
    # exponents shifted to be <= 0: exp(a(S+z-y))/(e^{aS}-1) = exp(a(z-y))/(1-e^{-aS})
    shift = 0.0 if z < y else -a * S
    return math.exp(a * (z - y) + shift) / -math.expm1(-a * S)


def _shifted_rhs(p: PBVPProblem, u: GridFunction) -> np.ndarray:
    if u.grid != (float(p.S), int(p.n)):
        raise DomainError(f"grid {u.grid} does not match problem grid {(p.S, p.n)}")
    with np.errstate(all="ignore"):
        fv = np.broadcast_to(np.asarray(p.F(p.nodes, u.values), dtype=float), u.values.shape)
    if not np.all(np.isfinite(fv)):
        raise NonFiniteError("right-hand side F returned non-finite values")
    return fv + p.a * u.values


def apply_pbvp_operator(p: PBVPProblem, u: GridFunction) -> GridFunction:
    """Apply ``A``.  Each node's integral is split at ``z = y_i`` into two smooth pieces."""
    conv = kernels.periodic_convolve if p.quadrature == PRODUCT else kernels.periodic_convolve_trapezoid
    out = conv(_shifted_rhs(p, u), float(p.a), p.h)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("operator output is not finite")
    return GridFunction(p.S, out)


def check_F_condition(p: PBVPProblem, s: Sampler, tol: float = DEFAULT_TOL) -> CheckReport:
    """Sample ``0 <= d <= b (r2 - r1)`` with ``d = (F(y,r2) + a r2) - (F(y,r1) + a r1)``."""
    parts = {"lower": _Part("F_lower", tol), "upper": _Part("F_upper", tol)}
    rng = s.rng()
    for _ in range(s.n):
        y = p.S * rng.random()
        r1, r2 = sorted((s.point(rng), s.point(rng)))
        d = (float(p.F(y, r2)) + p.a * r2) - (float(p.F(y, r1)) + p.a * r1)
        inputs = {"y": y, "r1": r1, "r2": r2}
        parts["lower"].le(0.0, d, inputs)
        parts["upper"].le(d, p.b * (r2 - r1), inputs)
    return _compose("F_condition", tol, parts)


def _verify_bound_solution(p: PBVPProblem, alpha: GridFunction, tol, upper: bool):
    if alpha.grid != (float(p.S), int(p.n)):
        raise DomainError(f"grid {alpha.grid} does not match problem grid {(p.S, p.n)}")
    if alpha.n < 4:
        raise DomainError(f"need n >= 4, got {alpha.n}")
    v = alpha.values
    if tol is None:
        tol = 1e-6 * (1.0 + float(np.max(np.abs(v))))
    d = np.empty_like(v)
    d[:-1] = np.diff(v) / alpha.h
    d[-1] = d[-2]
    fv = np.asarray(p.F(p.nodes, v), dtype=float) * np.ones_like(v)
    sign = -1.0 if upper else 1.0
    kind = "upper" if upper else "lower"
    parts = {"derivative": _Part(f"{kind}_derivative", 0.0), "boundary": _Part(f"{kind}_boundary", 0.0)}
    # lower: alpha' <= F + tol; upper: alpha' >= F - tol
    for i in range(v.size):
        parts["derivative"].le(sign * d[i], sign * fv[i] + tol, {"i": i, "y": float(alpha.nodes[i])})
    parts["boundary"].le(sign * v[0], sign * v[-1] + tol, {"alpha0": float(v[0]), "alphaS": float(v[-1])})
    rep = _compose(f"{kind}_solution", tol, parts)
    return rep.passed, rep


def verify_lower_solution(p: PBVPProblem, alpha: GridFunction, tol: float | None = None):
    """Check ``D+ alpha <= F(y, alpha) + tol`` at all nodes and ``alpha(0) <= alpha(S) + tol``.

    Forward differences are used, with the backward difference at the last
    node.  The default ``tol`` is ``1e-6 * (1 + max |alpha|)``.  Returns
    ``(ok, report)``.
    """
    return _verify_bound_solution(p, alpha, tol, upper=False)


def verify_upper_solution(p: PBVPProblem, alpha: GridFunction, tol: float | None = None):
    """Reverse inequalities of :func:`verify_lower_solution`."""
    return _verify_bound_solution(p, alpha, tol, upper=True)


def solve_pbvp(
    p: PBVPProblem,
    start: GridFunction | None = None,
    tol: float = DEFAULT_TOL_FUNCTION,
    max_iter: int = DEFAULT_MAX_ITER,
    t_grid=DEFAULT_T_GRID,
    require_monotone_trace: bool = False,
):
    """Ordered iteration of ``A`` from ``start`` (default ``u = 0``).

    ``start`` must be comparable with its image; a lower or upper solution
    always is.  The trace metadata records ``contraction_factor`` (estimated
    from residuals, ``None`` when too few) and the bound ``kappa = b / a``.

    Raises:
        IncomparableStart: propagated from the ordered iteration.
    """
    m = sup_parametric_metric(p.S, p.n)
    order = pointwise_order(p.S, p.n)
    u0 = GridFunction.constant(0.0, p.S, p.n) if start is None else start
    if not m.domain.contains(u0):
        raise DomainError(f"start {u0!r} is not on the problem grid")
    trace = ordered_iterate(lambda u: apply_pbvp_operator(p, u), u0, order, m, t_grid, tol, max_iter, require_monotone_trace)
    try:
        factor = estimate_contraction_factor(trace)
    except ValueError:
        factor = None
    trace.metadata["contraction_factor"] = factor
    trace.metadata["kappa_bound"] = p.kappa
    trace.metadata["kernel_backend"] = kernels.BACKEND
    return trace.final, trace


def pbvp_residual(p: PBVPProblem, u: GridFunction) -> float:
    """``max_i |D u_i - F(y_i, u_i)| + |u(0) - u(S)|`` with periodic central differences."""
    if u.grid != (float(p.S), int(p.n)):
        raise DomainError(f"grid {u.grid} does not match problem grid {(p.S, p.n)}")
    v = u.values
    n = u.n
    # node n is identified with node 0 for the wrap
    ring = v[:-1]
    du = (np.roll(ring, -1) - np.roll(ring, 1)) / (2 * u.h)
    du = np.append(du, du[0])
    fv = np.asarray(p.F(p.nodes, v), dtype=float) * np.ones_like(v)
    return float(np.max(np.abs(du - fv))) + abs(float(v[0] - v[n]))

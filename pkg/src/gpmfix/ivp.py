"""Second-order initial value problem ``Y'' + w^2 Y = g(x, Y)`` on ``[0, S]``.

With ``Y(0) = l1`` and ``Y'(0) = l2`` the problem is equivalent to the fixed
point of

    (T Y)(mu) = l1 cos(w mu) + c sin(w mu) + int_0^mu G(mu, u) g(u, Y(u)) du

with ``G(eta, u) = sin(w (eta - u)) / w`` for ``u <= eta`` and 0 otherwise.
The ODE forces ``c = l2 / w``; ``homogeneous_mode="verbatim"`` uses ``c = l2``
instead, which only matches the initial slope when ``w = 1``.

``T`` contracts in the sup metric when ``|g(y, r) - g(y, s)| <= w^2 phi(|r - s|)``
for a gauge ``phi`` and ``w S <= pi/2`` (so that ``1 - cos(w y) <= 1`` on the
interval).  Outside that range the solver only warns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .axioms import DEFAULT_TOL, CheckReport, Sampler, _compose, _Part
from .fixpoint import DEFAULT_MAX_ITER, DEFAULT_T_GRID, DEFAULT_TOL_FUNCTION, NonFiniteError, iterate
from .grid import DEFAULT_N, GridFunction, sup_parametric_metric
from .metric import DomainError, GaugeFunction

CONSISTENT = "consistent"
VERBATIM = "verbatim"


@dataclass(frozen=True)
class IVPProblem:
    """``Y'' + w^2 Y = g(x, Y)``, ``Y(0) = l1``, ``Y'(0) = l2`` on ``[0, S]``.

    ``g`` is called with numpy arrays ``(x, Y)`` of equal shape and must
    broadcast; scalar floats must work too.
    """

    w: float
    l1: float
    l2: float
    S: float
    g: Callable
    gauge: GaugeFunction | None = None
    n: int = DEFAULT_N
    homogeneous_mode: str = CONSISTENT

    def __post_init__(self):
        if not math.isfinite(self.w) or self.w == 0:
            raise DomainError(f"w must be a nonzero real, got {self.w}")
        if not (self.S > 0 and math.isfinite(self.S)):
            raise DomainError(f"S must be positive, got {self.S}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        if self.homogeneous_mode not in (CONSISTENT, VERBATIM):
            raise DomainError(f"homogeneous_mode must be {CONSISTENT!r} or {VERBATIM!r}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.S, int(self.n) + 1)

    @property
    def h(self) -> float:
        return self.S / self.n

    def homogeneous(self) -> GridFunction:
        """The ``g``-free part ``l1 cos(w y) + c sin(w y)``."""
        y = self.nodes
        c = self.l2 / self.w if self.homogeneous_mode == CONSISTENT else self.l2
        return GridFunction(self.S, self.l1 * np.cos(self.w * y) + c * np.sin(self.w * y))

    def contraction_guard(self) -> str | None:
        if abs(self.w) * self.S > math.pi / 2:
            return (
                f"w*S = {abs(self.w) * self.S:.6g} exceeds pi/2: the sup bound 1 - cos(w y) <= 1 "
                "fails, so the operator need not contract"
            )
        return None


def greens_ivp(eta, u, w: float):
    """``sin(w (eta - u)) / w`` for ``u <= eta``, else 0.  Broadcasts over arrays."""
    if w == 0:
        raise DomainError("w must be nonzero")
    eta = np.asarray(eta, dtype=float)
    u = np.asarray(u, dtype=float)
    out = np.where(u <= eta, np.sin(w * (eta - u)) / w, 0.0)
    return float(out) if out.ndim == 0 else out


def _forcing(p: IVPProblem, Y: GridFunction) -> np.ndarray:
    if Y.grid != (float(p.S), int(p.n)):
        raise DomainError(f"grid {Y.grid} does not match problem grid {(p.S, p.n)}")
    with np.errstate(all="ignore"):
        gv = np.broadcast_to(np.asarray(p.g(p.nodes, Y.values), dtype=float), Y.values.shape)
    if not np.all(np.isfinite(gv)):
        raise NonFiniteError("forcing g returned non-finite values")
    return gv


def apply_ivp_operator(p: IVPProblem, Y: GridFunction) -> GridFunction:
    """One application of the integral operator on the shared grid."""
    integral = kernels.ivp_convolve(_forcing(p, Y), float(p.w), p.h)
    out = p.homogeneous().values + integral
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("operator output is not finite")
    return GridFunction(p.S, out)


def check_ivp_condition(p: IVPProblem, s: Sampler, tol: float = DEFAULT_TOL) -> CheckReport:
    """Sample ``|g(y, r) - g(y, s)| / zeta <= w^2 phi(|r - s| / zeta)``.

    ``y`` is uniform on ``[0, S]``, ``r`` and ``s`` come from the sampler's
    point box and ``zeta`` from its ``t`` range.  A note is added when
    ``w S > pi/2``.
    """
    if p.gauge is None:
        raise DomainError("problem has no gauge function")
    part = _Part("lipschitz_gauge", tol)
    rng = s.rng()
    w2 = p.w * p.w
    for _ in range(s.n):
        y = p.S * rng.random()
        r, q = s.point(rng), s.point(rng)
        zeta = s.t(rng)
        lhs = abs(float(p.g(y, r)) - float(p.g(y, q))) / zeta
        rhs = w2 * p.gauge(abs(r - q) / zeta)
        part.le(lhs, rhs, {"y": y, "r": r, "s": q, "zeta": zeta})
    notes = []
    guard = p.contraction_guard()
    if guard:
        notes.append(guard)
    return _compose("ivp_condition", tol, {"lipschitz_gauge": part}, notes=notes)


def solve_ivp(
    p: IVPProblem,
    x0: GridFunction | None = None,
    tol: float = DEFAULT_TOL_FUNCTION,
    max_iter: int = DEFAULT_MAX_ITER,
    t_grid=DEFAULT_T_GRID,
):
    """Picard iteration of the integral operator in the sup metric.

    Starts from the homogeneous part unless ``x0`` is given.  Returns the
    final iterate and the :class:`~gpmfix.fixpoint.IterationTrace`; the trace
    metadata carries ``warnings`` (the ``w S > pi/2`` guard).
    """
    m = sup_parametric_metric(p.S, p.n)
    start = p.homogeneous() if x0 is None else x0
    if not m.domain.contains(start):
        raise DomainError(f"start {start!r} is not on the problem grid")
    trace = iterate(lambda Y: apply_ivp_operator(p, Y), start, m, t_grid, tol, max_iter)
    guard = p.contraction_guard()
    trace.metadata["warnings"] = [guard] if guard else []
    trace.metadata["kernel_backend"] = kernels.BACKEND
    return trace.final, trace


class IVPResidual(NamedTuple):
    interior: float
    initial_value: float
    initial_slope: float


def ode_residual(p: IVPProblem, Y: GridFunction) -> IVPResidual:
    """Finite-difference residuals of ``Y`` against the ODE and initial data.

    ``interior`` is ``max |D2 Y + w^2 Y - g(y, Y)|`` over interior nodes with
    central second differences.  ``initial_slope`` uses the second-order
    one-sided difference ``(-3 Y_0 + 4 Y_1 - Y_2) / (2 h)``.
    """
    if Y.n < 4:
        raise DomainError(f"need n >= 4 for residuals, got {Y.n}")
    h = Y.h
    v = Y.values
    d2 = (v[2:] - 2 * v[1:-1] + v[:-2]) / (h * h)
    gv = _forcing(p, Y)
    interior = float(np.max(np.abs(d2 + p.w * p.w * v[1:-1] - gv[1:-1])))
    return IVPResidual(interior, abs(float(v[0]) - p.l1), abs(float(-3 * v[0] + 4 * v[1] - v[2]) / (2 * h) - p.l2))

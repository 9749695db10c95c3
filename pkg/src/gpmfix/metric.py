"""Binary combine operations and generalized parametric metrics.

A generalized parametric metric is a distance ``rho(x, y, t)`` that depends on
a positive parameter ``t`` and whose triangle inequality splits ``t`` between
the two legs, joining them with a combine operation ``o``::

    rho(x, y, t1 + t2) <= rho(x, z, t1) o rho(y, z, t2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from numbers import Real
from typing import Any, Callable


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def _check_nonneg(value: float, name: str) -> float:
    if not isinstance(value, Real):
        raise DomainError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    if value < 0:
        raise DomainError(f"{name} must be nonnegative, got {value}")
    return value


def _check_t(t: float) -> float:
    if not isinstance(t, Real):
        raise DomainError(f"t must be a real number, got {type(t).__name__}")
    t = float(t)
    if not math.isfinite(t) or t <= 0:
        raise DomainError(f"t must be positive and finite, got {t}")
    return t


class CombineKind(Enum):
    MAX = "max"
    SUM = "sum"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CombineOp:
    """The binary operation ``o`` on nonnegative reals.

    Use :data:`MAX`, :data:`SUM` or :meth:`custom`.  For custom operations the
    axioms (identity, commutativity, associativity, monotonicity) are not
    enforced here; test them with :func:`gpmfix.axioms.check_combine_axioms`.
    """

    kind: CombineKind
    func: Callable[[float, float], float] | None = field(default=None, compare=False)
    name: str = ""

    @classmethod
    def custom(cls, func: Callable[[float, float], float], name: str = "custom") -> "CombineOp":
        return cls(CombineKind.CUSTOM, func, name)

    def __call__(self, a: float, b: float) -> float:
        return combine(self, a, b)

    def __str__(self) -> str:
        return self.name or self.kind.value


MAX = CombineOp(CombineKind.MAX, name="max")
SUM = CombineOp(CombineKind.SUM, name="sum")


def combine(op: CombineOp, a: float, b: float) -> float:
    """Apply ``a o b``.

    Raises:
        DomainError: if ``a`` or ``b`` is negative or not finite, or a custom
            operation returns a negative or non-finite value.
    """
    a = _check_nonneg(a, "a")
    b = _check_nonneg(b, "b")
    if op.kind is CombineKind.MAX:
        return max(a, b)
    if op.kind is CombineKind.SUM:
        return a + b
    out = op.func(a, b)
    try:
        return _check_nonneg(float(out), "combine result")
    except (TypeError, DomainError) as exc:
        raise DomainError(f"custom combine {op.name!r} returned {out!r}") from exc


class ScalarDomain:
    """The real line (or a subset of it) as a point domain."""

    tag = "scalar"

    def contains(self, x: Any) -> bool:
        return isinstance(x, Real) and not isinstance(x, bool) and math.isfinite(x)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarDomain)

    def __hash__(self) -> int:
        return hash(self.tag)

    def __repr__(self) -> str:
        return "ScalarDomain()"


SCALAR = ScalarDomain()


@dataclass(frozen=True)
class ParametricMetric:
    """A distance ``rho(x, y, t)`` with its combine operation.

    ``domain`` is any object with a ``tag`` attribute and a ``contains(x)``
    method; :data:`SCALAR` and :class:`gpmfix.grid.GridDomain` ship with the
    package.
    """

    distance: Callable[[Any, Any, float], float] = field(compare=False)
    combine: CombineOp
    domain: Any = SCALAR
    name: str = "metric"

    @property
    def domain_tag(self) -> str:
        return self.domain.tag

    def __call__(self, x: Any, y: Any, t: float) -> float:
        return eval_metric(self, x, y, t)


def eval_metric(m: ParametricMetric, x: Any, y: Any, t: float) -> float:
    """Evaluate ``m`` at ``(x, y, t)``.

    Raises:
        DomainError: if ``t <= 0``, a point is outside ``m.domain`` or the
            distance comes out negative or non-finite.
    """
    t = _check_t(t)
    for label, point in (("x", x), ("y", y)):
        if not m.domain.contains(point):
            raise DomainError(f"{label}={point!r} is not in the {m.domain_tag} domain of {m.name}")
    value = float(m.distance(x, y, t))
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{m.name} returned {value} at t={t}")
    return value


def power_metric(p: float) -> ParametricMetric:
    """``|x - y|**p / t`` on the reals, combined with Sum, for ``0 < p < 1``."""
    if not isinstance(p, Real) or not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    p = float(p)

    def distance(x, y, t):
        return abs(x - y) ** p / t

    return ParametricMetric(distance, SUM, SCALAR, name=f"power(p={p:g})")


def sqrt_metric() -> ParametricMetric:
    """``sqrt(|x - y|) / t`` on the reals, combined with Sum."""

    def distance(x, y, t):
        return math.sqrt(abs(x - y)) / t

    return ParametricMetric(distance, SUM, SCALAR, name="sqrt")


@dataclass(frozen=True)
class GaugeFunction:
    """Comparison function ``phi`` of a Boyd-Wong contraction.

    ``phi`` should satisfy ``phi(s) < s`` for ``s > 0`` and be upper
    semi-continuous from the right; neither property is checked on
    construction.
    """

    phi: Callable[[float], float] = field(compare=False)
    declared_nondecreasing: bool = False
    name: str = "phi"

    def __call__(self, s: float) -> float:
        return float(self.phi(s))


def linear_gauge(c: float) -> GaugeFunction:
    """``phi(s) = c * s``; a valid gauge for ``0 <= c < 1``."""
    if not 0 <= c < 1:
        raise DomainError(f"linear gauge slope must lie in [0, 1), got {c}")
    return GaugeFunction(lambda s: c * s, declared_nondecreasing=True, name=f"{c:g}*s")

"""Sampled verification of combine-operation, metric and contraction axioms.

Every check draws its inputs from a :class:`Sampler` driven by SplitMix64, so
a report is a deterministic function of (inputs, seed).  Checks never raise on
a failed axiom; failures are listed in the returned :class:`CheckReport`.

Inequalities ``lhs <= rhs`` are tested with the slack
``tol * max(1, |lhs|, |rhs|)``: absolute for O(1) quantities, relative for
large ones (small ``t`` makes built-in distances large).

Continuity and right upper semi-continuity are probed only along geometric
approach sequences of 20 terms.  That is a necessary-condition test; passing
it proves nothing about continuity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Any, Callable

import numpy as np

from .metric import SCALAR, CombineOp, DomainError, ParametricMetric, combine, eval_metric

DEFAULT_TOL = 1e-9
SEQUENCE_TERMS = 20
SEQUENCE_SAMPLES = 100

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

CONTINUITY_NOTE = (
    "continuity probed along sampled geometric approach sequences only; "
    "a necessary-condition check, not a proof"
)


class SplitMix64:
    """SplitMix64 generator; ``random()`` is ``(next >> 11) * 2**-53`` in ``[0, 1)``.

    ``random_array(k)`` returns exactly the next ``k`` values ``random()``
    would, computed with numpy ``uint64`` wraparound arithmetic.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _M1) & _MASK
        z = ((z ^ (z >> 27)) * _M2) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def random_array(self, k: int) -> np.ndarray:
        with np.errstate(over="ignore"):
            steps = np.arange(1, k + 1, dtype=np.uint64)
            z = np.uint64(self.state) + steps * np.uint64(_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + k * _GAMMA) & _MASK
        return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class Sampler:
    """Box of points, range of ``t`` and sample count.

    ``t`` is drawn from ``(t_lo, t_hi]`` so it is always positive when
    ``t_lo >= 0``.  Scalar points are uniform on ``[lo, hi)``; grid-function
    points get independent uniform node values in the same box.
    """

    point_bounds: tuple[float, float] = (-10.0, 10.0)
    t_bounds: tuple[float, float] = (0.0, 10.0)
    n: int = 1000
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"sample count must be a positive integer, got {self.n}")
        lo, hi = self.point_bounds
        if not lo <= hi:
            raise DomainError(f"empty point box {self.point_bounds}")
        t_lo, t_hi = self.t_bounds
        if not (0 <= t_lo < t_hi):
            raise DomainError(f"t range must satisfy 0 <= t_lo < t_hi, got {self.t_bounds}")

    def rng(self) -> SplitMix64:
        return SplitMix64(self.seed)

    def point(self, rng: SplitMix64, domain=SCALAR):
        lo, hi = self.point_bounds
        if getattr(domain, "tag", None) == "scalar":
            return lo + (hi - lo) * rng.random()
        size = domain.n + 1
        from .grid import GridFunction

        return GridFunction(domain.s_max, lo + (hi - lo) * rng.random_array(size))

    def t(self, rng: SplitMix64) -> float:
        t_lo, t_hi = self.t_bounds
        return t_lo + (t_hi - t_lo) * (1.0 - rng.random())

    def nonneg(self, rng: SplitMix64) -> float:
        lo, hi = self.point_bounds
        top = max(abs(lo), abs(hi)) or 1.0
        return top * rng.random()


@dataclass
class Violation:
    axiom: str
    inputs: dict
    lhs: float
    rhs: float
    gap: float

    def to_json_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "gap": _jsonable(self.gap),
        }


def _jsonable(v):
    if hasattr(v, "to_json_dict"):
        return v.to_json_dict()
    if isinstance(v, Real):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


@dataclass
class CheckReport:
    """Outcome of one sampled check.

    Composite checks keep one sub-report per axiom in ``parts``; the
    top-level ``violations`` is their concatenation.  ``exceptions`` holds
    documented, expected failures of a stronger probe that do not count
    against the axiom (e.g. Max under ties).
    """

    axiom: str
    n: int
    tol: float
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    parts: dict[str, "CheckReport"] = field(default_factory=dict)
    exceptions: list[Violation] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        d = {
            "axiom": self.axiom,
            "n": self.n,
            "tol": self.tol,
            "pass": self.passed,
            "violations": [v.to_json_dict() for v in self.violations],
        }
        if self.notes:
            d["notes"] = list(self.notes)
        if self.exceptions:
            d["exceptions"] = [v.to_json_dict() for v in self.exceptions]
        if self.stats:
            d["stats"] = {k: _jsonable(v) for k, v in self.stats.items()}
        if self.parts:
            d["parts"] = {k: p.to_json_dict() for k, p in self.parts.items()}
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)

    def summary(self) -> str:
        head = f"{self.axiom}: {'pass' if self.passed else 'FAIL'} (n={self.n}, tol={self.tol:g})"
        lines = [head]
        for key, part in self.parts.items():
            extra = f", {len(part.exceptions)} documented exceptions" if part.exceptions else ""
            lines.append(f"  {key}: {'pass' if part.passed else 'FAIL'} ({len(part.violations)} violations{extra})")
        return "\n".join(lines)


def slack(tol: float, *values: float) -> float:
    return tol * max(1.0, *(abs(v) for v in values))


class _Part:
    """Accumulates one axiom's violations."""

    def __init__(self, axiom: str, tol: float):
        self.report = CheckReport(axiom, 0, tol)
        self.tol = tol

    def le(self, lhs: float, rhs: float, inputs: dict) -> bool:
        """Record ``lhs <= rhs`` up to slack; returns whether it held."""
        self.report.n += 1
        gap = lhs - rhs
        if not (gap <= slack(self.tol, lhs, rhs)):
            self.report.violations.append(Violation(self.report.axiom, inputs, lhs, rhs, gap))
            return False
        return True

    def eq(self, lhs: float, rhs: float, inputs: dict) -> bool:
        self.report.n += 1
        gap = abs(lhs - rhs)
        if not (gap <= slack(self.tol, lhs, rhs)):
            self.report.violations.append(Violation(self.report.axiom, inputs, lhs, rhs, gap))
            return False
        return True

    def lt(self, lhs: float, rhs: float, inputs: dict, exception: bool = False) -> bool:
        """Strict ``lhs < rhs`` without slack."""
        if not exception:
            self.report.n += 1
        if lhs < rhs:
            return True
        v = Violation(self.report.axiom, inputs, lhs, rhs, lhs - rhs)
        (self.report.exceptions if exception else self.report.violations).append(v)
        return False

    def fail(self, inputs: dict, lhs=math.nan, rhs=math.nan) -> None:
        self.report.n += 1
        self.report.violations.append(Violation(self.report.axiom, inputs, lhs, rhs, math.nan))


def _compose(axiom: str, tol: float, parts: dict[str, _Part], notes=()) -> CheckReport:
    reps = {k: p.report for k, p in parts.items()}
    out = CheckReport(axiom, max((r.n for r in reps.values()), default=0), tol, parts=reps, notes=list(notes))
    for r in reps.values():
        out.violations.extend(r.violations)
    return out


def _tail_shrinks(gaps: list[float], tol: float, scale: float) -> bool:
    """True when the last gap is within slack or well below the largest gap."""
    last = gaps[-1]
    return last <= slack(tol, scale) or last <= 0.01 * max(gaps)


def check_combine_axioms(op: CombineOp, s: Sampler, tol: float = DEFAULT_TOL) -> CheckReport:
    """Sample the combine axioms (i)-(vii).

    Parts: ``i`` identity, ``ii`` monotonicity, ``iii`` commutativity, ``iv``
    associativity, ``v`` sequential continuity, ``vi`` strict joint
    monotonicity, ``vii`` ``a o a >= a``.  Part ``vi`` also probes the
    one-sided tie ``a o c < a o d`` for ``c < d``; failures there are stored as
    ``exceptions`` (Max fails it whenever ``a >= d``), not as violations.
    """
    names = {
        "i": "identity",
        "ii": "monotone",
        "iii": "commutative",
        "iv": "associative",
        "v": "continuity",
        "vi": "strict_monotone",
        "vii": "idempotent_lower_bound",
    }
    parts = {k: _Part(f"{k}:{v}", tol) for k, v in names.items()}
    rng = s.rng()

    def c(a, b):
        try:
            return combine(op, a, b)
        except DomainError:
            return math.nan

    for a in (0.0, 1.0, 3.0):
        parts["i"].eq(c(a, 0.0), a, {"a": a})

    seq_every = max(1, s.n // SEQUENCE_SAMPLES)
    for k in range(s.n):
        a, b, cc, d = (s.nonneg(rng) for _ in range(4))
        parts["i"].eq(c(a, 0.0), a, {"a": a})
        lo, hi = sorted((a, b))
        parts["ii"].le(c(lo, cc), c(hi, cc), {"a": lo, "b": hi, "c": cc})
        parts["iii"].eq(c(a, b), c(b, a), {"a": a, "b": b})
        parts["iv"].eq(c(a, c(b, cc)), c(c(a, b), cc), {"a": a, "b": b, "c": cc})
        parts["vii"].le(a, c(a, a), {"a": a})
        lo2, hi2 = sorted((cc, d))
        if lo < hi and lo2 < hi2:
            parts["vi"].lt(c(lo, lo2), c(hi, hi2), {"a": lo, "b": hi, "c": lo2, "d": hi2})
            parts["vi"].lt(c(a, lo2), c(a, hi2), {"a": a, "b": a, "c": lo2, "d": hi2}, exception=True)
        if k % seq_every == 0:
            _probe_continuity(parts["v"], c, a, b, rng, tol)

    rep = _compose("combine", tol, parts, notes=[CONTINUITY_NOTE])
    vi = rep.parts["vi"]
    if vi.exceptions:
        vi.notes.append(
            "one-sided tie a o c < a o d fails on some samples; axiom (vi) needs both "
            "arguments strictly smaller, so these are recorded as exceptions"
        )
    return rep


def _probe_continuity(part: _Part, c: Callable, a: float, b: float, rng: SplitMix64, tol: float) -> None:
    base = c(a, b)
    d0 = 0.5
    # approach from below only where the sequence stays nonnegative
    sa = -1.0 if (a >= d0 and rng.random() < 0.5) else 1.0
    sb = -1.0 if (b >= d0 and rng.random() < 0.5) else 1.0
    gaps = []
    for k in range(1, SEQUENCE_TERMS + 1):
        step = d0 * 2.0**-k
        gaps.append(abs(c(a + sa * step, b + sb * step) - base))
    inputs = {"a": a, "b": b, "direction_a": sa, "direction_b": sb}
    part.report.n += 1
    if any(math.isnan(g) for g in gaps) or math.isnan(base):
        part.report.violations.append(Violation(part.report.axiom, inputs, math.nan, base, math.nan))
    elif not _tail_shrinks(gaps, tol, base):
        part.report.violations.append(Violation(part.report.axiom, inputs, gaps[-1], 0.0, gaps[-1]))


def check_metric_axioms(m: ParametricMetric, s: Sampler, tol: float = DEFAULT_TOL) -> CheckReport:
    """Sample rho1 (one direction), rho2, rho3 and non-increase in ``t``.

    The converse half of rho1 (``rho = 0`` for all ``t`` implies ``x = y``)
    cannot be sampled and is only noted in the report.
    """
    names = {"rho1": "rho1:self_distance", "rho2": "rho2:symmetry", "rho3": "rho3:split_triangle", "t_monotone": "t_monotone"}
    parts = {k: _Part(v, tol) for k, v in names.items()}
    rng = s.rng()
    dom = m.domain
    for _ in range(s.n):
        x, y, z = s.point(rng, dom), s.point(rng, dom), s.point(rng, dom)
        t1, t2 = s.t(rng), s.t(rng)
        try:
            dxx = eval_metric(m, x, x, t1)
            dxy = eval_metric(m, x, y, t1)
            dyx = eval_metric(m, y, x, t1)
            lhs = eval_metric(m, x, y, t1 + t2)
            rhs = combine(m.combine, eval_metric(m, x, z, t1), eval_metric(m, y, z, t2))
            ta, tb = sorted((t1, t2))
            da, db = eval_metric(m, x, y, ta), eval_metric(m, x, y, tb)
        except DomainError:
            parts["rho1"].fail({"x": x, "y": y, "z": z, "t1": t1, "t2": t2})
            continue
        parts["rho1"].le(dxx, 0.0, {"x": x, "t": t1})
        parts["rho2"].eq(dxy, dyx, {"x": x, "y": y, "t": t1})
        parts["rho3"].le(lhs, rhs, {"x": x, "y": y, "z": z, "t1": t1, "t2": t2})
        parts["t_monotone"].le(db, da, {"x": x, "y": y, "t1": ta, "t2": tb})
    rep = _compose(
        f"metric[{m.name}]",
        tol,
        parts,
        notes=["rho1 converse (rho(x, y, t) = 0 for all t implies x = y) is not sample-checkable"],
    )
    return rep


def check_contraction(map_: Callable, m: ParametricMetric, spec, s: Sampler, tol: float = DEFAULT_TOL) -> CheckReport:
    """Sample a Banach or Boyd-Wong contraction inequality for ``map_``.

    ``stats["max_ratio"]`` is the largest observed ``lhs / rhs`` over samples
    with ``rhs > 0``.  For Boyd-Wong specs the gauge is also checked for
    ``phi(s) < s``, right upper semi-continuity and (if declared)
    monotonicity, all on the distances induced by the samples.
    """
    from .fixpoint import Banach, BoydWong

    if not isinstance(spec, (Banach, BoydWong)):
        raise TypeError(f"expected Banach or BoydWong, got {type(spec).__name__}")
    parts = {"contraction": _Part("contraction", tol)}
    if isinstance(spec, BoydWong):
        parts["gauge_below_identity"] = _Part("gauge_below_identity", tol)
        parts["gauge_usc_right"] = _Part("gauge_usc_right", tol)
        if spec.gauge.declared_nondecreasing:
            parts["gauge_nondecreasing"] = _Part("gauge_nondecreasing", tol)
    rng = s.rng()
    dom = m.domain
    max_ratio = 0.0
    induced: list[float] = []
    for _ in range(s.n):
        x, y, t = s.point(rng, dom), s.point(rng, dom), s.t(rng)
        d = eval_metric(m, x, y, t)
        try:
            lhs = eval_metric(m, map_(x), map_(y), t)
        except DomainError:
            parts["contraction"].fail({"x": x, "y": y, "t": t})
            continue
        rhs = spec.bound(d)
        parts["contraction"].le(lhs, rhs, {"x": x, "y": y, "t": t})
        if rhs > 0:
            max_ratio = max(max_ratio, lhs / rhs)
        if d > 0:
            induced.append(d)
    if isinstance(spec, BoydWong):
        phi = spec.gauge
        for d in induced:
            parts["gauge_below_identity"].lt(phi(d), d, {"s": d})
        every = max(1, len(induced) // SEQUENCE_SAMPLES)
        for d in induced[::every]:
            base = phi(d)
            excess = [max(0.0, phi(d + d * 2.0**-k) - base) for k in range(1, SEQUENCE_TERMS + 1)]
            part = parts["gauge_usc_right"]
            part.report.n += 1
            if not _tail_shrinks(excess, tol, base):
                part.report.violations.append(Violation(part.report.axiom, {"s": d}, base + excess[-1], base, excess[-1]))
        if "gauge_nondecreasing" in parts:
            for d1, d2 in zip(induced[::2], induced[1::2]):
                lo, hi = sorted((d1, d2))
                parts["gauge_nondecreasing"].le(phi(lo), phi(hi), {"s1": lo, "s2": hi})
    kind = f"banach(kappa={spec.kappa:g})" if isinstance(spec, Banach) else f"boyd_wong(phi={spec.gauge.name})"
    rep = _compose(f"contraction[{kind}]", tol, parts, notes=[CONTINUITY_NOTE] if isinstance(spec, BoydWong) else [])
    rep.stats["max_ratio"] = max_ratio
    return rep


def check_order_axioms(order, m: ParametricMetric, s: Sampler) -> CheckReport:
    """Sample reflexivity, transitivity and the meet/join bounds of ``order``.

    Transitivity is tested on chains ``x <= join(x, y) <= join(join(x, y), z)``
    since independent random points are rarely comparable.
    """
    names = ("reflexive", "transitive", "meet_lower_bound", "join_upper_bound", "metric_compatible")
    parts = {k: _Part(k, 0.0) for k in names}
    rng = s.rng()
    dom = m.domain
    t = s.t(rng)

    def holds(part, ok, inputs):
        part.report.n += 1
        if not ok:
            part.report.violations.append(Violation(part.report.axiom, inputs, math.nan, math.nan, math.nan))

    for _ in range(s.n):
        x, y, z = s.point(rng, dom), s.point(rng, dom), s.point(rng, dom)
        holds(parts["reflexive"], order.leq(x, x), {"x": x})
        u = order.join(x, y)
        w = order.join(u, z)
        if order.leq(x, u) and order.leq(u, w):
            holds(parts["transitive"], order.leq(x, w), {"x": x, "y": u, "z": w})
        lo = order.meet(x, y)
        holds(parts["meet_lower_bound"], order.leq(lo, x) and order.leq(lo, y), {"x": x, "y": y})
        holds(parts["join_upper_bound"], order.leq(x, u) and order.leq(y, u), {"x": x, "y": y})
        if order.leq(x, y) and order.leq(y, x):
            holds(parts["metric_compatible"], eval_metric(m, x, y, t) == 0.0, {"x": x, "y": y})
    return _compose("order", 0.0, parts)

"""Uniformly sampled functions on ``[0, S]`` and the structure built on them.

The space ``C[0, S]`` is represented by :class:`GridFunction`, its values at
the nodes ``y_i = i * S / n``.  On it live the sup parametric metric
``max_i |f_i - g_i| / t`` (combined with Max) and the pointwise partial order,
whose meet and join are the pointwise min and max.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .metric import MAX, DomainError, ParametricMetric

DEFAULT_N = 1000


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


class GridFunction:
    """Values of a function on the uniform grid of ``n + 1`` nodes over ``[0, s_max]``.

    Instances are immutable: the value array is copied and marked read-only.
    """

    __slots__ = ("s_max", "values")

    def __init__(self, s_max: float, values):
        s_max = float(s_max)
        if not math.isfinite(s_max) or s_max <= 0:
            raise DomainError(f"s_max must be positive, got {s_max}")
        arr = np.array(values, dtype=float)
        if arr.ndim != 1 or arr.size < 3:
            raise DomainError(f"need a 1-d array of at least 3 values (n >= 2), got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("grid function values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "s_max", s_max)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    @classmethod
    def from_callable(cls, f: Callable, s_max: float, n: int = DEFAULT_N) -> "GridFunction":
        """Sample ``f`` at the nodes.  ``f`` is called once with the node array."""
        nodes = np.linspace(0.0, s_max, int(n) + 1)
        vals = np.broadcast_to(np.asarray(f(nodes), dtype=float), nodes.shape)
        return cls(s_max, vals)

    @classmethod
    def constant(cls, c: float, s_max: float, n: int = DEFAULT_N) -> "GridFunction":
        return cls(s_max, np.full(int(n) + 1, float(c)))

    @property
    def n(self) -> int:
        return self.values.size - 1

    @property
    def h(self) -> float:
        return self.s_max / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.s_max, self.n + 1)

    @property
    def grid(self) -> tuple[float, int]:
        return (self.s_max, self.n)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.s_max, values)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"GridFunction(s_max={self.s_max:g}, n={self.n})"

    # serialization

    def to_json_dict(self) -> dict:
        return {"s_max": self.s_max, "n": self.n, "values": [float(v) for v in self.values]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "GridFunction":
        f = cls(d["s_max"], d["values"])
        if "n" in d and int(d["n"]) != f.n:
            raise DomainError(f"n={d['n']} does not match {f.n + 1} values")
        return f

    def to_csv(self, path: str | Path | None = None, value_name: str = "value") -> str:
        """Write ``y,value`` rows with 17 significant digits; returns the text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["y", value_name])
        for y, v in zip(self.nodes, self.values):
            w.writerow([_fmt(y), _fmt(v)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path: str | Path) -> "GridFunction":
        return cls.parse_csv(Path(path).read_text())

    @classmethod
    def parse_csv(cls, text: str) -> "GridFunction":
        rows = list(csv.reader(io.StringIO(text)))[1:]
        ys = np.array([float(r[0]) for r in rows])
        vals = np.array([float(r[1]) for r in rows])
        f = cls(ys[-1], vals)
        if not np.allclose(ys, f.nodes, rtol=0, atol=1e-12 * max(1.0, f.s_max)):
            raise DomainError("CSV nodes are not a uniform grid starting at 0")
        return f

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


@dataclass(frozen=True)
class GridDomain:
    """Point domain of grid functions on a fixed ``(S, n)`` grid."""

    s_max: float
    n: int
    tag: str = "grid"

    def contains(self, x: Any) -> bool:
        return isinstance(x, GridFunction) and x.grid == (float(self.s_max), int(self.n))

    def random_point(self, draw: Callable[[], float], lo: float, hi: float) -> GridFunction:
        return GridFunction(self.s_max, [lo + (hi - lo) * draw() for _ in range(self.n + 1)])


def _check_grid(s_max: float, n: int) -> tuple[float, int]:
    if not s_max > 0 or not math.isfinite(s_max):
        raise DomainError(f"S must be positive, got {s_max}")
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    return float(s_max), int(n)


def _same_grid(f: GridFunction, g: GridFunction, expected: tuple[float, int] | None = None):
    if not isinstance(f, GridFunction) or not isinstance(g, GridFunction):
        raise DomainError("expected GridFunction arguments")
    if f.grid != g.grid or (expected is not None and f.grid != expected):
        raise DomainError(f"grid mismatch: {f.grid} vs {g.grid}" + (f" (expected {expected})" if expected else ""))


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    _same_grid(f, g)
    return float(np.max(np.abs(f.values - g.values)))


def sup_parametric_metric(s_max: float, n: int = DEFAULT_N) -> ParametricMetric:
    """``max_i |f_i - g_i| / t`` over grid functions on ``(s_max, n)``, combined with Max."""
    s_max, n = _check_grid(s_max, n)

    def distance(f, g, t):
        return float(np.max(np.abs(f.values - g.values))) / t

    return ParametricMetric(distance, MAX, GridDomain(s_max, n), name=f"sup(S={s_max:g}, n={n})")


def eval_interp(f: GridFunction, y: float) -> float:
    """Piecewise-linear interpolation of ``f`` at ``y``; exact at nodes."""
    if not 0 <= y <= f.s_max:
        raise DomainError(f"y={y} outside [0, {f.s_max}]")
    pos = y / f.h
    k = round(pos)
    if abs(pos - k) <= 1e-9:
        return float(f.values[k])
    i = min(int(pos), f.n - 1)
    frac = pos - i
    return float((1.0 - frac) * f.values[i] + frac * f.values[i + 1])


def leq(f: GridFunction, g: GridFunction) -> bool:
    """Exact pointwise order ``f(y_i) <= g(y_i)`` at every node."""
    _same_grid(f, g)
    return bool(np.all(f.values <= g.values))


def leq_eps(eps: float) -> Callable[[GridFunction, GridFunction], bool]:
    """Pointwise order that tolerates violations up to ``eps``."""

    def _leq(f, g):
        _same_grid(f, g)
        return bool(np.all(f.values <= g.values + eps))

    return _leq


def meet(f: GridFunction, g: GridFunction) -> GridFunction:
    _same_grid(f, g)
    return f.with_values(np.minimum(f.values, g.values))


def join(f: GridFunction, g: GridFunction) -> GridFunction:
    _same_grid(f, g)
    return f.with_values(np.maximum(f.values, g.values))


def pointwise_order(s_max: float, n: int = DEFAULT_N, eps: float = 0.0):
    """Pointwise partial order on ``(s_max, n)`` grid functions with min/max lattice ops."""
    from .fixpoint import PartialOrderSpec

    grid = _check_grid(s_max, n)

    def checked(op):
        def wrapper(f, g):
            _same_grid(f, g, grid)
            return op(f, g)

        return wrapper

    base_leq = leq if eps == 0 else leq_eps(eps)
    return PartialOrderSpec(leq=checked(base_leq), meet=checked(meet), join=checked(join))

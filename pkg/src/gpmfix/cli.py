"""Command-line front end.

Commands: check-op, check-metric, check-contraction, iterate, solve-ivp,
solve-pbvp, reproduce-example2.  Every parameter can come from a JSON config
file (``--config``) and be overridden by flags.  Exit codes: 0 success,
1 usage or domain error, 2 no convergence.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import kernels
from .axioms import Sampler, check_combine_axioms, check_contraction, check_metric_axioms
from .expr import EvalError, ExprSyntaxError, compile_expr
from .fixpoint import Banach, BoydWong, IncomparableStart, Status, estimate_contraction_factor, iterate
from .grid import GridFunction, sup_parametric_metric
from .ivp import CONSISTENT, VERBATIM, IVPProblem, check_ivp_condition, ode_residual, solve_ivp
from .metric import MAX, SUM, CombineOp, DomainError, GaugeFunction, ParametricMetric, linear_gauge, power_metric, sqrt_metric
from .pbvp import PRODUCT, TRAPEZOID, PBVPProblem, check_F_condition, pbvp_residual, solve_pbvp, verify_lower_solution, verify_upper_solution

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2

COMMANDS = (
    "check-op",
    "check-metric",
    "check-contraction",
    "iterate",
    "solve-ivp",
    "solve-pbvp",
    "reproduce-example2",
)
FAMILIES = ("example2", "ivp-homogeneous", "ivp-manufactured", "pbvp-constant", "pbvp-sinusoid")


class UsageError(Exception):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class RunConfig:
    command: str = ""
    family: str | None = None
    op: str | None = None
    op_expr: str | None = None
    metric: str | None = None
    metric_expr: str | None = None
    combine: str | None = None
    map_expr: str | None = None
    phi_expr: str | None = None
    g_expr: str | None = None
    F_expr: str | None = None
    w: float | None = None
    l1: float | None = None
    l2: float | None = None
    a: float | None = None
    b: float | None = None
    c: float | None = None
    S: float | None = None
    n: int | None = None
    p: float | None = None
    kappa: float | None = None
    mode: str | None = None
    quadrature: str | None = None
    x0: float | None = None
    start: str | None = None
    t_grid: list[float] | None = None
    tol: float | None = None
    max_iter: int | None = None
    seed: int | None = None
    samples: int | None = None
    bounds: list[float] | None = None
    t_range: list[float] | None = None
    x_range: list[float] | None = None
    t_fixed: list[float] | None = None
    x_fixed: list[float] | None = None
    steps: int | None = None
    out_dir: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - names)
        if unknown:
            raise UsageError([f"unknown config field {k!r}" for k in unknown])
        return cls(**d)

    def to_dict(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError([f"cannot read config {path}: {exc}"]) from exc
        if not isinstance(data, dict):
            raise UsageError([f"config {path} must hold a JSON object"])
        return cls.from_dict(data)

    def merged(self, overrides: dict) -> "RunConfig":
        d = self.to_dict()
        d.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(d)


# defaults applied after config and flags
_FAMILY_DEFAULTS = {
    "example2": {},
    "ivp-homogeneous": {"w": 1.0, "l1": 2.0, "l2": 3.0, "S": 1.0},
    "ivp-manufactured": {"w": 1.0, "l1": 0.0, "l2": 0.0, "S": 1.0},
    "pbvp-constant": {"b": 1.0, "c": 2.0, "a": 1.5, "S": 1.0},
    "pbvp-sinusoid": {"b": 1.0, "a": 1.5, "S": 1.0},
}
_COMMON_DEFAULTS = {"seed": 0, "samples": 1000, "max_iter": 10_000, "out_dir": ".", "mode": CONSISTENT}


def _with_defaults(cfg: RunConfig) -> RunConfig:
    d = dict(_COMMON_DEFAULTS)
    d.update(_FAMILY_DEFAULTS.get(cfg.family or "", {}))
    d.update(cfg.to_dict())
    return RunConfig.from_dict(d)


def _validate(cfg: RunConfig) -> list[str]:
    errs = []

    def positive(name):
        v = getattr(cfg, name)
        if v is not None and not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
            errs.append(f"{name} must be positive, got {v!r}")

    if cfg.command not in COMMANDS:
        errs.append(f"command must be one of {', '.join(COMMANDS)}, got {cfg.command!r}")
    if cfg.family is not None and cfg.family not in FAMILIES:
        errs.append(f"family must be one of {', '.join(FAMILIES)}, got {cfg.family!r}")
    for name in ("S", "a", "b", "tol", "samples", "max_iter", "steps"):
        positive(name)
    if cfg.n is not None and (int(cfg.n) != cfg.n or cfg.n < 2):
        errs.append(f"n must be an integer >= 2, got {cfg.n!r}")
    if cfg.w is not None and (cfg.w == 0 or not math.isfinite(cfg.w)):
        errs.append(f"w must be a nonzero real, got {cfg.w!r}")
    if cfg.p is not None and not 0 < cfg.p < 1:
        errs.append(f"p must lie in (0, 1), got {cfg.p!r}")
    if cfg.kappa is not None and not 0 <= cfg.kappa < 1:
        errs.append(f"kappa must lie in [0, 1), got {cfg.kappa!r}")
    if cfg.a is not None and cfg.b is not None and cfg.a > 0 and cfg.b > 0 and not cfg.b < cfg.a:
        errs.append(f"need b < a, got a={cfg.a}, b={cfg.b}")
    if cfg.mode not in (None, CONSISTENT, VERBATIM):
        errs.append(f"mode must be {CONSISTENT!r} or {VERBATIM!r}, got {cfg.mode!r}")
    if cfg.quadrature not in (None, PRODUCT, TRAPEZOID):
        errs.append(f"quadrature must be {PRODUCT!r} or {TRAPEZOID!r}, got {cfg.quadrature!r}")
    if cfg.combine not in (None, "sum", "max"):
        errs.append(f"combine must be 'sum' or 'max', got {cfg.combine!r}")
    if cfg.op not in (None, "sum", "max"):
        errs.append(f"op must be 'sum' or 'max', got {cfg.op!r}")
    if cfg.metric not in (None, "sqrt", "power", "sup"):
        errs.append(f"metric must be 'sqrt', 'power' or 'sup', got {cfg.metric!r}")
    if cfg.t_grid is not None and (not cfg.t_grid or any(not t > 0 for t in cfg.t_grid)):
        errs.append(f"t_grid must be a nonempty list of positive reals, got {cfg.t_grid!r}")
    for name in ("bounds", "t_range", "x_range"):
        v = getattr(cfg, name)
        if v is not None and (len(v) != 2 or not v[0] < v[1]):
            errs.append(f"{name} must be an increasing pair, got {v!r}")
    if cfg.t_range is not None and len(cfg.t_range) == 2 and cfg.t_range[0] < 0:
        errs.append(f"t_range must be nonnegative, got {cfg.t_range!r}")
    if cfg.steps is not None and cfg.steps < 2:
        errs.append(f"steps must be >= 2, got {cfg.steps!r}")
    if cfg.t_fixed is not None and any(not t > 0 for t in cfg.t_fixed):
        errs.append(f"t_fixed entries must be positive, got {cfg.t_fixed!r}")
    if cfg.x_fixed is not None and any(x < 0 for x in cfg.x_fixed):
        errs.append(f"x_fixed entries must be nonnegative, got {cfg.x_fixed!r}")
    if cfg.command == "reproduce-example2":
        if cfg.x_range is not None and cfg.x_range[0] < 0:
            errs.append(f"x_range must be nonnegative, got {cfg.x_range!r}")
        if cfg.t_range is not None and not cfg.t_range[0] > 0:
            errs.append(f"t_range must be positive, got {cfg.t_range!r}")
    if cfg.command == "solve-ivp" and cfg.family is None and cfg.g_expr is None:
        errs.append("solve-ivp needs --family or --g-expr")
    if cfg.command == "solve-ivp" and cfg.w is None and cfg.family is None:
        errs.append("w is required")
    if cfg.command == "solve-pbvp" and cfg.family is None and cfg.F_expr is None:
        errs.append("solve-pbvp needs --family or --F-expr")
    if cfg.command == "solve-pbvp" and (cfg.a is None or cfg.b is None) and cfg.family is None:
        errs.append("a and b are required")
    if cfg.command in ("solve-ivp", "solve-pbvp") and cfg.family is None and cfg.S is None:
        errs.append("S is required")
    if cfg.command in ("check-contraction", "iterate") and cfg.family is None and cfg.map_expr is None:
        errs.append(f"{cfg.command} needs --family example2 or --map-expr")
    if cfg.command == "check-contraction" and cfg.family is None and cfg.kappa is None and cfg.phi_expr is None:
        errs.append("check-contraction needs --kappa or --phi-expr")
    if cfg.command == "check-op" and cfg.op is None and cfg.op_expr is None:
        errs.append("check-op needs --op or --op-expr")
    if cfg.command == "check-metric" and cfg.metric is None and cfg.metric_expr is None:
        errs.append("check-metric needs --metric or --metric-expr")
    if cfg.family is not None and cfg.command in ("solve-ivp",) and not cfg.family.startswith("ivp-"):
        errs.append(f"family {cfg.family!r} is not an IVP family")
    if cfg.family is not None and cfg.command in ("solve-pbvp",) and not cfg.family.startswith("pbvp-"):
        errs.append(f"family {cfg.family!r} is not a periodic BVP family")
    if cfg.family is not None and cfg.command in ("check-contraction", "iterate") and cfg.family != "example2":
        errs.append(f"family {cfg.family!r} is not a scalar map family")
    return errs


# builders


def _combine(cfg: RunConfig) -> CombineOp:
    return MAX if cfg.combine == "max" else SUM


def _scalar_metric(cfg: RunConfig) -> ParametricMetric:
    if cfg.metric_expr:
        f = compile_expr(cfg.metric_expr, ("x", "y", "t"))
        return ParametricMetric(lambda x, y, t: f(x, y, t), _combine(cfg), name=cfg.metric_expr)
    if cfg.metric == "power":
        return power_metric(cfg.p if cfg.p is not None else 0.5)
    return sqrt_metric()


def _gauge(src: str) -> GaugeFunction:
    f = compile_expr(src, ("r",))
    return GaugeFunction(lambda s: f(s), declared_nondecreasing=False, name=src)


def _t_grid(cfg):
    return tuple(cfg.t_grid) if cfg.t_grid else (0.5, 1.0, 2.0)


def build_ivp(cfg: RunConfig) -> IVPProblem:
    n = int(cfg.n or 1000)
    if cfg.family == "ivp-homogeneous":
        g, gauge = (lambda x, y: 0.0 * x), linear_gauge(0.5)
    elif cfg.family == "ivp-manufactured":
        g, gauge = (lambda x, y: 2 + x**2 + 0.5 * (y - x**2)), linear_gauge(0.5)
    else:
        g = compile_expr(cfg.g_expr, ("x", "y"))
        gauge = _gauge(cfg.phi_expr) if cfg.phi_expr else None
    if cfg.phi_expr:
        gauge = _gauge(cfg.phi_expr)
    return IVPProblem(cfg.w, cfg.l1 or 0.0, cfg.l2 or 0.0, cfg.S, g, gauge, n, cfg.mode or CONSISTENT)


def build_pbvp(cfg: RunConfig) -> PBVPProblem:
    n = int(cfg.n or 1000)
    a, b, S = float(cfg.a), float(cfg.b), float(cfg.S)
    if cfg.family == "pbvp-constant":
        c = 2.0 if cfg.c is None else float(cfg.c)
        F = lambda y, u: -b * u + c  # noqa: E731
    elif cfg.family == "pbvp-sinusoid":
        k = 2 * math.pi / S
        F = lambda y, u: k * np.cos(k * y) - b * (u - np.sin(k * y))  # noqa: E731
    else:
        F = compile_expr(cfg.F_expr, ("y", "u"))
    return PBVPProblem(S, a, b, F, n, cfg.quadrature or PRODUCT)


def _sampler(cfg: RunConfig, default_bounds=(-10.0, 10.0), default_t=(0.0, 10.0)) -> Sampler:
    return Sampler(
        tuple(cfg.bounds) if cfg.bounds else default_bounds,
        tuple(cfg.t_range) if cfg.t_range else default_t,
        int(cfg.samples),
        int(cfg.seed),
    )


# outputs


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    path.write_text(buf.getvalue())


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.integer):
        return int(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _safe(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _exit_for(status: Status) -> int:
    return EXIT_OK if status is Status.CONVERGED else EXIT_NO_CONVERGENCE


def _out(cfg: RunConfig) -> Path:
    p = Path(cfg.out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _stem(cfg: RunConfig) -> str:
    return cfg.command.replace("-", "_")


# commands


def cmd_check_op(cfg: RunConfig, log) -> int:
    if cfg.op_expr:
        f = compile_expr(cfg.op_expr, ("x", "y"))
        op = CombineOp.custom(lambda a, b: f(a, b), cfg.op_expr)
    else:
        op = MAX if cfg.op == "max" else SUM
    rep = check_combine_axioms(op, _sampler(cfg), cfg.tol if cfg.tol is not None else 1e-9)
    _write_json(_out(cfg) / f"{_stem(cfg)}_report.json", rep.to_json_dict())
    log(rep.summary())
    return EXIT_OK


def cmd_check_metric(cfg: RunConfig, log) -> int:
    if cfg.metric == "sup" and not cfg.metric_expr:
        m = sup_parametric_metric(cfg.S or 1.0, int(cfg.n or 16))
    else:
        m = _scalar_metric(cfg)
    rep = check_metric_axioms(m, _sampler(cfg), cfg.tol if cfg.tol is not None else 1e-9)
    _write_json(_out(cfg) / f"{_stem(cfg)}_report.json", rep.to_json_dict())
    log(rep.summary())
    return EXIT_OK


def _scalar_map(cfg: RunConfig):
    if cfg.map_expr:
        f = compile_expr(cfg.map_expr, ("x",))
        return lambda x: f(x)
    return lambda mu: mu / 16.0


def cmd_check_contraction(cfg: RunConfig, log) -> int:
    T = _scalar_map(cfg)
    m = _scalar_metric(cfg)
    if cfg.kappa is not None:
        spec = Banach(cfg.kappa)
    elif cfg.phi_expr:
        spec = BoydWong(_gauge(cfg.phi_expr))
    else:
        spec = BoydWong(linear_gauge(0.5))
    bounds = (-1.0, 1.0) if cfg.family == "example2" else (-10.0, 10.0)
    rep = check_contraction(T, m, spec, _sampler(cfg, default_bounds=bounds), cfg.tol if cfg.tol is not None else 1e-9)
    _write_json(_out(cfg) / f"{_stem(cfg)}_report.json", rep.to_json_dict())
    log(rep.summary())
    log(f"max ratio lhs/rhs: {rep.stats['max_ratio']:.17g}")
    return EXIT_OK


def cmd_iterate(cfg: RunConfig, log) -> int:
    T = _scalar_map(cfg)
    m = _scalar_metric(cfg)
    x0 = 1.0 if cfg.x0 is None else float(cfg.x0)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    trace = iterate(T, x0, m, _t_grid(cfg), tol, int(cfg.max_iter))
    out = _out(cfg)
    _write_csv(out / f"{_stem(cfg)}_iterates.csv", ["n", "x"], [(k, float(x)) for k, x in enumerate(trace.iterates)])
    trace.to_csv(out / f"{_stem(cfg)}_trace.csv")
    try:
        factor = estimate_contraction_factor(trace)
    except ValueError:
        factor = None
    summary = {
        "command": cfg.command,
        "status": trace.status.value,
        "converged_at": trace.converged_at,
        "iterations": trace.iterations,
        "final": _safe(trace.final),
        "contraction_factor": _safe(factor),
        "config": cfg.to_dict(),
    }
    _write_json(out / f"{_stem(cfg)}_summary.json", summary)
    log(f"{trace.status.value} after {trace.iterations} iterations, final x = {float(trace.final):.6g}")
    return _exit_for(trace.status)


def cmd_solve_ivp(cfg: RunConfig, log) -> int:
    p = build_ivp(cfg)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    Y, trace = solve_ivp(p, None, tol, int(cfg.max_iter), _t_grid(cfg))
    out = _out(cfg)
    Y.to_csv(out / f"{_stem(cfg)}_solution.csv", value_name="Y")
    trace.to_csv(out / f"{_stem(cfg)}_trace.csv")
    try:
        factor = estimate_contraction_factor(trace)
    except ValueError:
        factor = None
    res = ode_residual(p, Y) if Y.n >= 4 else None
    condition = None
    if p.gauge is not None:
        rep = check_ivp_condition(p, _sampler(cfg, default_t=(0.1, 10.0)))
        condition = rep.passed
    summary = {
        "command": cfg.command,
        "status": trace.status.value,
        "converged_at": trace.converged_at,
        "iterations": trace.iterations,
        "contraction_factor": _safe(factor),
        "residuals": None if res is None else {k: _safe(v) for k, v in res._asdict().items()},
        "condition_passed": condition,
        "warnings": trace.metadata.get("warnings", []),
        "kernel_backend": kernels.BACKEND,
        "config": cfg.to_dict(),
    }
    _write_json(out / f"{_stem(cfg)}_summary.json", summary)
    for w in summary["warnings"]:
        log(f"warning: {w}")
    log(f"{trace.status.value} after {trace.iterations} iterations")
    return _exit_for(trace.status)


def cmd_solve_pbvp(cfg: RunConfig, log) -> int:
    p = build_pbvp(cfg)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    if cfg.start is None and cfg.family == "pbvp-sinusoid":
        # constant lower solution: 0 <= F(y, -c) needs c >= sqrt(k^2 + 1) with k = 2 pi / S
        k = 2 * math.pi / p.S
        start = GridFunction.constant(-math.ceil(math.sqrt(k * k + 1) + 1), p.S, p.n)
    elif cfg.start in (None, "zero"):
        start = GridFunction.constant(0.0, p.S, p.n)
    else:
        try:
            start = GridFunction.constant(float(cfg.start), p.S, p.n)
        except ValueError:
            raise UsageError([f"start must be 'zero' or a number, got {cfg.start!r}"]) from None
    lower_ok, _ = verify_lower_solution(p, start)
    upper_ok, _ = verify_upper_solution(p, start)
    u, trace = solve_pbvp(p, start, tol, int(cfg.max_iter), _t_grid(cfg))
    out = _out(cfg)
    u.to_csv(out / f"{_stem(cfg)}_solution.csv", value_name="u")
    trace.to_csv(out / f"{_stem(cfg)}_trace.csv")
    cond = check_F_condition(p, _sampler(cfg))
    summary = {
        "command": cfg.command,
        "status": trace.status.value,
        "converged_at": trace.converged_at,
        "iterations": trace.iterations,
        "contraction_factor": _safe(trace.metadata.get("contraction_factor")),
        "kappa_bound": p.kappa,
        "monotone": trace.monotone,
        "direction": trace.direction,
        "start_is_lower_solution": lower_ok,
        "start_is_upper_solution": upper_ok,
        "condition_passed": cond.passed,
        "residuals": {"pbvp": _safe(pbvp_residual(p, u))},
        "warnings": [],
        "kernel_backend": kernels.BACKEND,
        "config": cfg.to_dict(),
    }
    _write_json(out / f"{_stem(cfg)}_summary.json", summary)
    log(f"{trace.status.value} after {trace.iterations} iterations")
    return _exit_for(trace.status)


def example2_tables(t_fixed=(1.0, 30.0), x_fixed=(0.5, 1.8), x_range=(0.0, 2.0), t_range=(0.5, 30.0), steps=41):
    """Rows ``(t, x, H, G)`` and ``(x, t, H, G)`` for ``T(mu) = mu/16``, ``phi(s) = s/2``.

    ``H(x, t) = rho(T a, T mu, t)`` and ``G(x, t) = phi(rho(a, mu, t))`` with
    ``x = |a - mu|``, evaluated through the sqrt metric at ``a = x``, ``mu = 0``.
    """
    m = sqrt_metric()
    phi = linear_gauge(0.5)

    def H(x, t):
        return m(x / 16.0, 0.0, t)

    def G(x, t):
        return phi(m(x, 0.0, t))

    xs = np.linspace(x_range[0], x_range[1], steps)
    ts = np.linspace(t_range[0], t_range[1], steps)
    table1 = [(float(t), float(x), H(float(x), t), G(float(x), t)) for t in t_fixed for x in xs]
    table2 = [(float(x), float(t), H(x, float(t)), G(x, float(t))) for x in x_fixed for t in ts]
    return table1, table2


def cmd_reproduce_example2(cfg: RunConfig, log) -> int:
    kwargs = {}
    for name in ("t_fixed", "x_fixed", "x_range", "t_range"):
        v = getattr(cfg, name)
        if v is not None:
            kwargs[name] = tuple(float(x) for x in v)
    if cfg.steps is not None:
        kwargs["steps"] = int(cfg.steps)
    table1, table2 = example2_tables(**kwargs)
    out = _out(cfg)
    _write_csv(out / "example2_table1.csv", ["t", "x", "H", "G"], table1)
    _write_csv(out / "example2_table2.csv", ["x", "t", "H", "G"], table2)
    log(f"wrote {len(table1)} + {len(table2)} rows to {out}")
    return EXIT_OK


_DISPATCH = {
    "check-op": cmd_check_op,
    "check-metric": cmd_check_metric,
    "check-contraction": cmd_check_contraction,
    "iterate": cmd_iterate,
    "solve-ivp": cmd_solve_ivp,
    "solve-pbvp": cmd_solve_pbvp,
    "reproduce-example2": cmd_reproduce_example2,
}


def cmd_solve(cfg: RunConfig, log=print) -> int:
    """Validate ``cfg`` and run its command; returns the exit code."""
    cfg = _with_defaults(cfg)
    errs = _validate(cfg)
    if errs:
        raise UsageError(errs)
    return _DISPATCH[cfg.command](cfg, log)


# argument parsing


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_common(sp):
    sp.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    sp.add_argument("--out-dir", dest="out_dir")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--max-iter", dest="max_iter", type=int)
    sp.add_argument("--t-grid", dest="t_grid", type=_floats)
    sp.add_argument("--bounds", type=_floats, help="point box lo,hi for sampling")
    sp.add_argument("--t-range", dest="t_range", type=_floats)


def _add_metric(sp):
    sp.add_argument("--metric", choices=("sqrt", "power", "sup"))
    sp.add_argument("--metric-expr", dest="metric_expr", help="distance in x, y, t")
    sp.add_argument("--combine", choices=("sum", "max"))
    sp.add_argument("--p", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gpmfix", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check-op", help="sample the combine-operation axioms")
    _add_common(sp)
    sp.add_argument("--op", choices=("sum", "max"))
    sp.add_argument("--op-expr", dest="op_expr", help="custom operation in x, y")

    sp = sub.add_parser("check-metric", help="sample the parametric metric axioms")
    _add_common(sp)
    _add_metric(sp)
    sp.add_argument("--S", type=float)
    sp.add_argument("--n", type=int)

    sp = sub.add_parser("check-contraction", help="sample a contraction inequality")
    _add_common(sp)
    _add_metric(sp)
    sp.add_argument("--family", choices=("example2",))
    sp.add_argument("--map-expr", dest="map_expr", help="self-map in x")
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--phi-expr", dest="phi_expr", help="gauge in r")

    sp = sub.add_parser("iterate", help="successive approximation of a scalar map")
    _add_common(sp)
    _add_metric(sp)
    sp.add_argument("--family", choices=("example2",))
    sp.add_argument("--map-expr", dest="map_expr")
    sp.add_argument("--x0", type=float)

    sp = sub.add_parser("solve-ivp", help="Y'' + w^2 Y = g(x, Y) by Picard iteration")
    _add_common(sp)
    sp.add_argument("--family", choices=("ivp-homogeneous", "ivp-manufactured"))
    sp.add_argument("--g-expr", dest="g_expr", help="forcing in x, y (y is the state)")
    sp.add_argument("--phi-expr", dest="phi_expr", help="gauge in r for the condition check")
    for name in ("w", "l1", "l2", "S"):
        sp.add_argument(f"--{name}", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--mode", choices=(CONSISTENT, VERBATIM))

    sp = sub.add_parser("solve-pbvp", help="u' = F(y, u), u(0) = u(S) by ordered iteration")
    _add_common(sp)
    sp.add_argument("--family", choices=("pbvp-constant", "pbvp-sinusoid"))
    sp.add_argument("--F-expr", dest="F_expr", help="right-hand side in y, u")
    for name in ("a", "b", "c", "S"):
        sp.add_argument(f"--{name}", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--start", help="'zero' or a constant start value")
    sp.add_argument("--quadrature", choices=(PRODUCT, TRAPEZOID))

    sp = sub.add_parser("reproduce-example2", help="tables of H = rho(Ta, Tmu, t) and G = phi(rho(a, mu, t))")
    _add_common(sp)
    sp.add_argument("--t-fixed", dest="t_fixed", type=_floats)
    sp.add_argument("--x-fixed", dest="x_fixed", type=_floats)
    sp.add_argument("--x-range", dest="x_range", type=_floats)
    sp.add_argument("--steps", type=int)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    flags = {k: v for k, v in vars(ns).items() if k != "config"}
    try:
        base = RunConfig.read(ns.config) if ns.config else RunConfig()
        cfg = base.merged(flags)
        return cmd_solve(cfg)
    except UsageError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ExprSyntaxError, EvalError, IncomparableStart) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""A small arithmetic expression language for user-supplied functions.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?            # right-associative
    atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  Functions: ``sin``,
``cos``, ``exp``, ``sqrt``, ``abs``, ``pow``; constant ``pi``.  Evaluation
accepts floats or numpy arrays for the variables.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, src: str = ""):
        super().__init__(f"{message} at position {pos}" + (f": {src!r}" if src else ""))
        self.pos = pos


class UnknownNameError(ExprSyntaxError):
    pass


class EvalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Union[Number, Variable, Unary, Binary, Call]

FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "sqrt": 1, "abs": 1, "pow": 2}
CONSTANTS = {"pi": math.pi}
ALL_VARIABLES = frozenset("xytru")

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str):
    pos = 0
    toks = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {src[bad]!r}", bad, src)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str, allowed: frozenset):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.allowed = allowed

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", pos, self.src)

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", pos, self.src)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            operand = self.unary()
            return Unary("neg", operand) if text == "-" else operand
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Number(float(text))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if text not in FUNCTIONS:
                    raise UnknownNameError(f"unknown function {text!r}", pos, self.src)
                self.take()
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[text]:
                    raise ExprSyntaxError(f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", pos, self.src)
                return Call(text, tuple(args))
            if text in CONSTANTS:
                return Number(CONSTANTS[text])
            if text not in self.allowed:
                raise UnknownNameError(f"unknown variable {text!r} (allowed: {', '.join(sorted(self.allowed))})", pos, self.src)
            return Variable(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", pos, self.src)


def parse_expr(src: str, allowed_vars: Iterable[str] = ALL_VARIABLES) -> Expr:
    """Parse ``src`` into an expression tree.

    Raises:
        ExprSyntaxError: malformed input; ``pos`` is the offending offset.
        UnknownNameError: a variable outside ``allowed_vars`` or an unknown function.
    """
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src, frozenset(allowed_vars)).parse()


def _finite(v, what: str):
    if not np.all(np.isfinite(v)):
        raise EvalError(f"{what} produced a non-finite value")
    return v


def _eval(node: Expr, env: dict):
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Variable):
        try:
            return env[node.name]
        except KeyError:
            raise EvalError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Unary):
        return -_eval(node.operand, env)
    if isinstance(node, Binary):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if np.any(np.asarray(b) == 0):
                raise EvalError("division by zero")
            return a / b
        return _finite(np.power(a, b) if isinstance(a, np.ndarray) or isinstance(b, np.ndarray) else _pow(a, b), "^")
    args = [_eval(a, env) for a in node.args]
    name = node.name
    if name == "sqrt":
        if np.any(np.asarray(args[0]) < 0):
            raise EvalError("sqrt of a negative number")
        return np.sqrt(args[0])
    if name == "pow":
        return _finite(np.power(*args) if any(isinstance(a, np.ndarray) for a in args) else _pow(*args), "pow")
    return _finite(getattr(np, name)(args[0]), name)


def _pow(a: float, b: float) -> float:
    try:
        out = float(a) ** float(b)
    except (ZeroDivisionError, OverflowError) as exc:
        raise EvalError(f"{a}^{b}: {exc}") from None
    if isinstance(out, complex):
        raise EvalError(f"{a}^{b} is not real")
    return out


def eval_expr(ast: Expr, bindings: dict):
    """Evaluate with variables bound to floats or broadcastable numpy arrays.

    Raises:
        EvalError: division by zero, sqrt of a negative, an unbound variable,
            or any non-finite result.
    """
    with np.errstate(all="ignore"):
        out = _eval(ast, bindings)
    _finite(out, "expression")
    if isinstance(out, np.ndarray):
        return out
    return float(out)


def compile_expr(src: str, argnames: tuple[str, ...]) -> Callable:
    """Parse ``src`` and return ``f(*args)`` binding ``argnames`` positionally."""
    ast = parse_expr(src, argnames)

    def f(*args):
        if len(args) != len(argnames):
            raise TypeError(f"expected {len(argnames)} arguments {argnames}, got {len(args)}")
        return eval_expr(ast, dict(zip(argnames, args)))

    f.__name__ = f"expr[{src}]"
    f.source = src
    return f

"""A small expression language for functions of one complex variable ``z``.

Grammar (Python operator precedence)::

    expr   := expr ('+'|'-'|'*'|'/'|'**'|'^') expr | ('-'|'+') expr
            | expr ('<'|'<='|'>'|'>=') expr | NAME '(' args ')' | '(' expr ')'
            | NUMBER | NUMBER 'j' | 'z' | 'i' | 'pi' | 'e'

Functions: exp, log, sqrt, sin, cos, conj, abs, re, im and
``where(cond, a, b)``, which picks ``a`` where ``cond`` holds and ``b``
elsewhere (for piecewise definitions). ``^`` means power.
"""

from __future__ import annotations

import ast
import math
from typing import Callable

import numpy as np

from .errors import ParseError

_FUNCS: dict[str, Callable] = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "conj": np.conj,
    "abs": np.abs,
    "re": np.real,
    "im": np.imag,
}
_CONSTS = {"i": 1j, "pi": math.pi, "e": math.e}
_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}
_CMPOPS = {ast.Lt: np.less, ast.LtE: np.less_equal, ast.Gt: np.greater, ast.GtE: np.greater_equal}


class Expression:
    """A compiled expression; calling it evaluates on a complex array."""

    def __init__(self, source: str, fn: Callable):
        self.source = source
        self._fn = fn

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self._fn(z)
        return np.broadcast_to(np.asarray(out, dtype=complex), z.shape).copy()

    def __repr__(self):
        return f"Expression({self.source!r})"


def _fail(node, msg):
    raise ParseError(msg, line=getattr(node, "lineno", None),
                     column=getattr(node, "col_offset", -1) + 1 or None)


def _real(x):
    return np.real(x) if np.iscomplexobj(x) else x


def _build(node) -> Callable:
    if isinstance(node, ast.Expression):
        return _build(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float, complex)):
            _fail(node, f"unsupported literal {node.value!r}")
        v = complex(node.value)
        return lambda z: v
    if isinstance(node, ast.Name):
        if node.id == "z":
            return lambda z: z
        if node.id in _CONSTS:
            v = _CONSTS[node.id]
            return lambda z: v
        _fail(node, f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        arg = _build(node.operand)
        return (lambda z: -arg(z)) if isinstance(node.op, ast.USub) else arg
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op, a, b = _BINOPS[type(node.op)], _build(node.left), _build(node.right)
        return lambda z: op(a(z), b(z))
    if isinstance(node, ast.Compare):
        if len(node.ops) != 1 or type(node.ops[0]) not in _CMPOPS:
            _fail(node, "comparisons take one of <, <=, >, >= between two operands")
        op, a, b = _CMPOPS[type(node.ops[0])], _build(node.left), _build(node.comparators[0])
        return lambda z: op(_real(a(z)), _real(b(z)))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        if name != "where" and name not in _FUNCS:
            _fail(node, f"unknown function {name!r}")
        args = [_build(a) for a in node.args]
        if name == "where":
            if len(args) != 3:
                _fail(node, "where() takes (condition, if_true, if_false)")
            c, a, b = args
            return lambda z: np.where(np.asarray(c(z), dtype=bool), a(z), b(z))
        if name in _FUNCS:
            if len(args) != 1:
                _fail(node, f"{name}() takes one argument")
            fn, a = _FUNCS[name], args[0]
            return lambda z: fn(a(z))
    _fail(node, f"unsupported syntax: {type(node).__name__}")


def compile_expression(source: str) -> Expression:
    """Parse ``source`` into an :class:`Expression`; raises ParseError."""
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression")
    text = source.strip().replace("^", "**")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"invalid expression: {exc.msg}", line=exc.lineno, column=exc.offset) from None
    return Expression(source.strip(), _build(tree))

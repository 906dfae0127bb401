"""A small expression language for user-defined symbols u_t(z) and phi_t(z).

Grammar (``^`` and ``**`` are the same operator, right associative)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom (("^" | "**") unary)?
    atom    := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"
    NAME    := z | t | i | pi | e | bound parameter | function name
    func    := exp | log | sqrt | conj | abs

``log`` and ``sqrt`` use principal branches.  Derivatives in ``z`` are
carried alongside values (forward mode), so every parsed expression that is
analytic in ``z`` comes with its derivative.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .bergman import ComplexFunction

__all__ = ["ExpressionError", "Expression", "compile_expression", "parse_symbol_expression"]

_CONSTANTS = {"i": 1j, "pi": math.pi, "e": math.e}
_FUNCTIONS = ("exp", "log", "sqrt", "conj", "abs")
_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


class ExpressionError(ValueError):
    """Syntax or name error, with the 0-based character position."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{pointer}")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[bad]!r}", bad, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", float(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


# AST nodes are tuples: ("num", value), ("var", name), ("neg", a),
# ("bin", op, a, b), ("call", fname, a)
class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[0] != "op" or tok[1] != value:
            raise ExpressionError(f"expected {value!r}", tok[2], self.text)

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError(f"unexpected token {tok[1]!r}", tok[2], self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = ("bin", op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return ("neg", inner) if tok[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return ("bin", "^", base, self.unary())
        return base

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return ("num", value)
        if kind == "name":
            if value in _FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return ("call", value, arg)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                raise ExpressionError(f"unknown function {value!r}", pos, self.text)
            return ("var", value, pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ExpressionError("unexpected end of expression", pos, self.text)
        raise ExpressionError(f"unexpected token {value!r}", pos, self.text)


def _names(node, acc):
    tag = node[0]
    if tag == "var":
        acc.append((node[1], node[2]))
    elif tag == "neg":
        _names(node[1], acc)
    elif tag == "bin":
        _names(node[2], acc)
        _names(node[3], acc)
    elif tag == "call":
        _names(node[2], acc)
    return acc


def _depends_on_z(node) -> bool:
    return any(name == "z" for name, _ in _names(node, []))


def _is_integer_constant(node):
    """Integer value of a z- and t-free literal exponent such as 2 or -3, else None."""
    if node[0] == "num" and float(node[1]).is_integer():
        return int(node[1])
    if node[0] == "neg":
        inner = _is_integer_constant(node[1])
        return None if inner is None else -inner
    return None


def _eval(node, env, want_d):
    """Return (value, dvalue/dz); dvalue is None when want_d is false."""
    tag = node[0]
    if tag == "num":
        return node[1], (0.0 if want_d else None)
    if tag == "var":
        name = node[1]
        if name == "z":
            return env["z"], (1.0 if want_d else None)
        return env[name], (0.0 if want_d else None)
    if tag == "neg":
        a, da = _eval(node[1], env, want_d)
        return -a, (-da if want_d else None)
    if tag == "call":
        fname = node[1]
        a, da = _eval(node[2], env, want_d)
        if fname == "exp":
            v = np.exp(a)
            return v, (v * da if want_d else None)
        if fname == "log":
            return np.log(a + 0j), (da / a if want_d else None)
        if fname == "sqrt":
            v = np.sqrt(a + 0j)
            return v, (0.5 * da / v if want_d else None)
        # conj and abs are not analytic; their z-derivative exists only for z-free arguments
        v = np.conj(a) if fname == "conj" else np.abs(a)
        if want_d and not np.all(np.asarray(da) == 0):
            raise ExpressionError(f"{fname}() of a z-dependent argument has no complex derivative", 0)
        return v, (0.0 if want_d else None)
    op = node[1]
    a, da = _eval(node[2], env, want_d)
    b, db = _eval(node[3], env, want_d)
    if op == "+":
        return a + b, (da + db if want_d else None)
    if op == "-":
        return a - b, (da - db if want_d else None)
    if op == "*":
        return a * b, (da * b + a * db if want_d else None)
    if op == "/":
        return a / b, ((da * b - a * db) / (b * b) if want_d else None)
    n = _is_integer_constant(node[3])
    if n is None and not _depends_on_z(node[3]) and np.ndim(b) == 0 and complex(b).imag == 0 and float(complex(b).real).is_integer() and abs(complex(b).real) < 2 ** 31:
        n = int(complex(b).real)
    if n is not None:
        v = (a + 0j) ** n
        if not want_d:
            return v, None
        return v, (n * (a + 0j) ** (n - 1) * da if n else 0.0)
    log_a = np.log(a + 0j)
    v = np.exp(b * log_a)
    if not want_d:
        return v, None
    return v, v * (db * log_a + b * da / a)


def _power_nodes(node, acc):
    tag = node[0]
    if tag == "bin":
        if node[1] == "^":
            acc.append(node)
        _power_nodes(node[2], acc)
        _power_nodes(node[3], acc)
    elif tag in ("neg", "call"):
        _power_nodes(node[-1], acc)
    return acc


# 33 x 33 interior sample grid used for branch-cut heuristics
_g = np.linspace(-0.98, 0.98, 33)
_GRID = (_g[:, None] + 1j * _g[None, :]).ravel()
_GRID = _GRID[np.abs(_GRID) < 0.99]


@dataclass(frozen=True)
class Expression:
    """A parsed expression; bind ``t`` and parameters to get a ComplexFunction."""

    text: str
    tree: tuple
    names: frozenset

    def _env(self, z, t, params):
        env = {k: complex(v) for k, v in params.items()}
        env.update(_CONSTANTS)
        if t is not None:
            env["t"] = float(t)
        env["z"] = z
        return env

    def check_names(self, params) -> None:
        for name, pos in _names(self.tree, []):
            if name in ("z", "t") or name in _CONSTANTS or name in params:
                continue
            raise ExpressionError(f"unknown identifier {name!r}", pos, self.text)

    def evaluate(self, z, t=None, **params):
        self.check_names(params)
        if t is None and "t" in self.names:
            raise ExpressionError("expression uses t but no t value was bound", self.text.find("t"), self.text)
        z = np.asarray(z, dtype=complex)
        value, _ = _eval(self.tree, self._env(z, t, params), False)
        return np.broadcast_to(np.asarray(value, dtype=complex), z.shape).copy() if z.shape else complex(value)

    def derivative(self, z, t=None, **params):
        self.check_names(params)
        z = np.asarray(z, dtype=complex)
        _, d = _eval(self.tree, self._env(z, t, params), True)
        return np.broadcast_to(np.asarray(d, dtype=complex), z.shape).copy() if z.shape else complex(d)

    def branch_warnings(self, t=None, **params) -> tuple:
        """Flag non-integer powers whose z-dependent base gets close to the negative real axis."""
        out = []
        for node in _power_nodes(self.tree, []):
            base, expo = node[2], node[3]
            if not _depends_on_z(base) or _is_integer_constant(expo) is not None:
                continue
            vals, _ = _eval(base, self._env(_GRID, t, params), False)
            vals = np.broadcast_to(np.asarray(vals, dtype=complex), _GRID.shape)
            left = vals[vals.real < 0]
            if left.size and np.min(np.abs(left.imag) / np.abs(left)) < 0.05:
                out.append(f"power with base near the negative real axis: branch cut may cross the disk in {self.text!r}")
        return tuple(out)

    def bind(self, t=None, **params) -> ComplexFunction:
        self.check_names(params)
        if t is None and "t" in self.names:
            raise ExpressionError("expression uses t but no t value was bound", self.text.find("t"), self.text)
        env_params = dict(params)

        def ev(z):
            return self.evaluate(z, t, **env_params)

        def deriv(z):
            return self.derivative(z, t, **env_params)

        label = self.text if t is None else f"{self.text} @ t={t:g}"
        return ComplexFunction(ev, deriv, frozenset(), label, self.branch_warnings(t, **params))


def compile_expression(text: str) -> Expression:
    tree = _Parser(text).parse()
    return Expression(text, tree, frozenset(name for name, _ in _names(tree, [])))


def parse_symbol_expression(text: str, t=None, **params) -> ComplexFunction:
    """Parse ``text`` and bind ``t`` and named parameters, giving z -> value."""
    return compile_expression(text).bind(t, **params)

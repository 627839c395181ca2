"""A small expression language for functions and curve components.

Grammar (highest binding first)::

    atom    := NUMBER | IDENT | FUNC "(" expr ")" | "(" expr ")"
    power   := atom [ "^" power ]                 # right-associative
    first   := [ "-" ] power ( ("*" | "/") power )*
    term    := power ( ("*" | "/") power )*
    expr    := first ( ("+" | "-") term )*

Unary minus binds tighter than ``*``/``/`` but looser than ``^`` and is only
accepted at the start of an expression or parenthesis, so ``2*x+-1`` is an
error. There is no implicit multiplication. ``pi`` is a named constant.
"""

import math
import re
from dataclasses import dataclass
from numbers import Real

import numpy as np

from . import jet as J
from .errors import DomainError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Const:
    value: float

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Unary:
    fn: str  # one of FUNCTIONS or "neg"
    child: object

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: object
    right: object

    def __str__(self):
        return to_text(self)


Expr = Const | Var | Unary | Binary


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    offset: int  # byte offset into the UTF-8 source


def _tokenize(text):
    toks = []
    pos = 0
    byte = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", byte,
                             ("number", "identifier", "operator", "("))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), byte))
        byte += len(m.group().encode("utf-8"))
        pos = m.end()
    toks.append(_Tok("end", "", byte))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.offset, expected)

    def expect(self, text):
        if self.peek().text != text or self.peek().kind != "op":
            self.fail((repr(text),))
        return self.take()

    def expr(self):
        node = self.first()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            node = Binary(op, node, self.term())
        return node

    def first(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            node = Unary("neg", self.power())
            return self.mul_tail(node)
        return self.term()

    def term(self):
        return self.mul_tail(self.power())

    def mul_tail(self, node):
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            node = Binary(op, node, self.power())
        return node

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            return Binary("^", base, self.power())
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.take()
            if tok.text in FUNCTIONS:
                self.expect("(")
                child = self.expr()
                self.expect(")")
                return Unary(tok.text, child)
            if tok.text in CONSTANTS:
                return Const(CONSTANTS[tok.text])
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(("number", "identifier", "'('"))


def parse(text):
    """Parse ``text`` into an expression tree; raises :class:`ParseError`."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, ("number", "identifier", "'('", "'-'"))
    p = _Parser(text)
    node = p.expr()
    if p.peek().kind != "end":
        p.fail(("operator", "end of input"))
    return node


def as_expr(e):
    """Accept an :data:`Expr` or source text."""
    if isinstance(e, str):
        return parse(e)
    if isinstance(e, (Const, Var, Unary, Binary)):
        return e
    raise TypeError(f"expected expression or string, got {type(e).__name__}")


def to_text(e):
    """Canonical, fully parenthesised rendering that parses back to ``e``."""
    if isinstance(e, Const):
        v = e.value
        return repr(v) if v >= 0 else f"(-{-v!r})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.fn == "neg":
            return f"(-{to_text(e.child)})"
        return f"{e.fn}({to_text(e.child)})"
    return f"({to_text(e.left)}{e.op}{to_text(e.right)})"


def variables(e):
    """Names of the free variables of ``e``."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Unary):
        return variables(e.child)
    return variables(e.left) | variables(e.right)


# -- evaluation --------------------------------------------------------------

def _ipow_real(x, n):
    # same multiplication order as jet._ipow so order-0 jets agree bitwise
    result = 1.0
    sq = x
    while n:
        if n & 1:
            result = result * sq
        n >>= 1
        if n:
            sq = sq * sq
    return result


def _real_pow(x, p):
    if p.is_integer() and abs(p) <= 1 << 20:
        n = int(p)
        if n < 0:
            d = _ipow_real(x, -n)
            if d == 0.0:
                raise DomainError("zero raised to a negative power")
            return 1.0 / d
        return _ipow_real(x, n)
    if not x > 0:
        raise DomainError(f"non-integer power {p} of nonpositive value {x}")
    return math.exp(math.log(x) * p)


def _real_unary(fn, x):
    if fn == "neg":
        return -x
    if fn == "sin":
        return math.sin(x)
    if fn == "cos":
        return math.cos(x)
    if fn == "tan":
        c = math.cos(x)
        if c == 0.0:
            raise DomainError(f"tan pole at {x}")
        return math.sin(x) / c
    if fn == "exp":
        if x > 709.0:
            raise DomainError(f"exp overflow at {x}")
        return math.exp(x)
    if fn == "log":
        if not x > 0:
            raise DomainError(f"log of nonpositive value {x}")
        return math.log(x)
    if fn == "sqrt":
        if x < 0:
            raise DomainError(f"sqrt of negative value {x}")
        return math.sqrt(x)
    raise ValueError(f"unknown function {fn!r}")


def eval_real(e, env):
    """Evaluate ``e`` with variables bound to floats in ``env``."""
    e = as_expr(e)
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return float(env[e.name])
        except KeyError:
            raise KeyError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return _real_unary(e.fn, eval_real(e.child, env))
    a = eval_real(e.left, env)
    b = eval_real(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b
    if not variables(e.right):
        return _real_pow(a, b)
    if not a > 0:
        raise DomainError(f"variable power of nonpositive value {a}")
    return math.exp(b * math.log(a))


_JET_UNARY = {
    "neg": lambda a: -a,
    "sin": J.sin,
    "cos": J.cos,
    "tan": J.tan,
    "exp": J.exp,
    "log": J.log,
    "sqrt": J.sqrt,
}


def eval_jet(e, env):
    """Evaluate ``e`` over jets; all jets in ``env`` must share base and order."""
    e = as_expr(e)
    ref = next((v for v in env.values() if isinstance(v, J.Jet)), None)
    if ref is None:
        raise ValueError("eval_jet needs at least one jet binding")
    for v in env.values():
        if isinstance(v, J.Jet) and (v.base != ref.base or v.order != ref.order):
            raise ValueError("all variable jets must share base and order")
    return _eval_jet(e, env, ref)


def _eval_jet(e, env, ref):
    if isinstance(e, Const):
        return J.jet_constant(e.value, ref.base, ref.order)
    if isinstance(e, Var):
        try:
            v = env[e.name]
        except KeyError:
            raise KeyError(f"unbound variable {e.name!r}") from None
        if isinstance(v, Real):
            return J.jet_constant(float(v), ref.base, ref.order)
        return v
    if isinstance(e, Unary):
        return _JET_UNARY[e.fn](_eval_jet(e.child, env, ref))
    a = _eval_jet(e.left, env, ref)
    if e.op == "^":
        if not variables(e.right):
            return J.power(a, eval_real(e.right, {}))
        return J.exp(_eval_jet(e.right, env, ref) * J.log(a))
    b = _eval_jet(e.right, env, ref)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    return a / b


# -- single-variable helpers ---------------------------------------------------

def univariate(e, default="x"):
    """Return ``(expr, variable_name)`` for an expression of at most one variable."""
    e = as_expr(e)
    names = variables(e)
    if len(names) > 1:
        raise ValueError(f"expected a function of one variable, got {sorted(names)}")
    return e, (next(iter(names)) if names else default)


def jet_at(e, t, K):
    """Jet of the one-variable function ``e`` at ``t`` through order ``K``."""
    e, name = univariate(e)
    return eval_jet(e, {name: J.jet_variable(t, K)})


def value_at(e, t):
    e, name = univariate(e)
    return eval_real(e, {name: t})


def constant_value(text):
    """Evaluate a variable-free expression such as ``2*pi``."""
    e = as_expr(text)
    if variables(e):
        raise ValueError(f"expected a constant, got variables {sorted(variables(e))}")
    return eval_real(e, {})


# -- vectorised evaluation ---------------------------------------------------------

def _array_unary(fn, x):
    if fn == "neg":
        return -x
    if fn == "sin":
        return np.sin(x)
    if fn == "cos":
        return np.cos(x)
    if fn == "tan":
        return np.sin(x) / np.cos(x)
    if fn == "exp":
        if np.any(x > 709.0):
            raise DomainError("exp overflow")
        return np.exp(x)
    if fn == "log":
        if np.any(~(x > 0)):
            raise DomainError("log of nonpositive value")
        return np.log(x)
    if fn == "sqrt":
        if np.any(x < 0):
            raise DomainError("sqrt of negative value")
        return np.sqrt(x)
    raise ValueError(f"unknown function {fn!r}")


def eval_array(e, env):
    """Evaluate ``e`` elementwise over numpy arrays bound in ``env``.

    Raises :class:`DomainError` if any element leaves a function's domain;
    use :func:`eval_array_masked` to get NaN there instead.
    """
    e = as_expr(e)
    if isinstance(e, Const):
        return np.float64(e.value)
    if isinstance(e, Var):
        try:
            return np.asarray(env[e.name], dtype=float)
        except KeyError:
            raise KeyError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return _array_unary(e.fn, eval_array(e.child, env))
    a = eval_array(e.left, env)
    b = eval_array(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        if np.any(b == 0):
            raise DomainError("division by zero")
        return a / b
    if not variables(e.right):
        p = float(b)
        if p.is_integer():
            if p < 0 and np.any(a == 0):
                raise DomainError("zero raised to a negative power")
            return a ** int(p)
        if np.any(~(a > 0)):
            raise DomainError(f"non-integer power {p} of nonpositive value")
        return np.exp(np.log(a) * p)
    if np.any(~(a > 0)):
        raise DomainError("variable power of nonpositive value")
    return np.exp(b * np.log(a))


def eval_array_masked(e, env):
    """Like :func:`eval_array` but yields NaN where evaluation is undefined."""
    with np.errstate(all="ignore"):
        return _masked(as_expr(e), env)


def _masked(e, env):
    if isinstance(e, Const):
        return np.float64(e.value)
    if isinstance(e, Var):
        return np.asarray(env[e.name], dtype=float)
    if isinstance(e, Unary):
        x = _masked(e.child, env)
        if e.fn == "log":
            return np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), np.nan)
        if e.fn == "sqrt":
            return np.where(x >= 0, np.sqrt(np.abs(x)), np.nan)
        if e.fn == "exp":
            return np.where(x <= 709.0, np.exp(np.minimum(x, 709.0)), np.nan)
        return _array_unary(e.fn, x)
    a = _masked(e.left, env)
    b = _masked(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        return np.where(b != 0, a / np.where(b != 0, b, 1.0), np.nan)
    if not variables(e.right) and float(b).is_integer():
        return a ** int(b)
    return np.where(a > 0, np.exp(b * np.log(np.where(a > 0, a, 1.0))), np.nan)


def univariate_array(e, xs):
    e, name = univariate(e)
    out = eval_array(e, {name: np.asarray(xs, dtype=float)})
    return np.broadcast_to(out, np.shape(xs)).astype(float)

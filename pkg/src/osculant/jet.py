"""Truncated Taylor series ("jets") at a point.

A :class:`Jet` of order ``K`` at ``base`` stores ``a_0..a_K`` with
``a_i = f^(i)(base) / i!``. Arithmetic and the elementary functions propagate
these coefficients exactly through order ``K`` (up to floating-point
rounding), so ``derivative(i)`` returns the i-th derivative of any composite
built from them.
"""

import math
from numbers import Real

import numpy as np

from . import _backend as kern
from .errors import DivisionByZeroJet, DomainError, OrderExceeded

MAX_ORDER = 24

_FACTORIALS = np.array([math.factorial(i) for i in range(MAX_ORDER + 2)], dtype=float)


class Jet:
    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("jet needs a non-empty 1-d coefficient sequence")
        if c.size - 1 > MAX_ORDER:
            raise OrderExceeded(f"jet order {c.size - 1} exceeds maximum {MAX_ORDER}")
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite jet coefficient (overflow or pole)")
        c.flags.writeable = False
        object.__setattr__(self, "base", float(base))
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def value(self):
        return float(self.coeffs[0])

    def derivative(self, i):
        return derivative(self, i)

    def derivatives(self):
        """All derivatives ``f(t), f'(t), ..., f^(K)(t)`` as an array."""
        return self.coeffs * _FACTORIALS[: self.coeffs.size]

    def deriv(self):
        """Jet of ``f'`` at the same base, one order lower."""
        if self.order == 0:
            raise OrderExceeded("cannot differentiate an order-0 jet")
        k = np.arange(1, self.coeffs.size)
        return Jet(self.base, self.coeffs[1:] * k)

    def truncate(self, order):
        if order > self.order:
            raise OrderExceeded(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.base, self.coeffs[: order + 1])

    def __call__(self, h):
        """Evaluate the truncated polynomial at offset ``h`` from the base."""
        return float(np.polynomial.polynomial.polyval(h, self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.base != self.base or other.order != self.order:
                raise ValueError(
                    f"incompatible jets: base {self.base} order {self.order} vs "
                    f"base {other.base} order {other.order}"
                )
            return other
        if isinstance(other, Real):
            return jet_constant(float(other), self.base, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.base, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.base, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.base, other.coeffs - self.coeffs)

    def __neg__(self):
        return Jet(self.base, -self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Real):
            return Jet(self.base, self.coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.base, kern.series_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            if other == 0:
                raise DivisionByZeroJet("division by zero constant")
            return Jet(self.base, self.coeffs / float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _div(other, self)

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        return power(self, p)

    def __rpow__(self, base):
        if not isinstance(base, Real) or base <= 0:
            raise DomainError("real power base must be positive")
        return exp(self * math.log(base))

    def __repr__(self):
        return f"Jet(base={self.base!r}, coeffs={self.coeffs.tolist()!r})"

    def allclose(self, other, rtol=1e-12, atol=0.0):
        return self.base == other.base and np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol)


def _div(a, b):
    if b.coeffs[0] == 0.0:
        raise DivisionByZeroJet(f"divisor vanishes at base point {b.base}")
    return Jet(a.base, kern.series_div(a.coeffs, b.coeffs))


def jet_variable(t, K):
    """Jet of the identity ``x -> x`` at ``t``."""
    if K < 0:
        raise ValueError("jet order must be >= 0")
    c = np.zeros(K + 1)
    c[0] = t
    if K >= 1:
        c[1] = 1.0
    return Jet(t, c)


def jet_constant(value, t, K):
    c = np.zeros(K + 1)
    c[0] = value
    return Jet(t, c)


def jet_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def derivative(a, i):
    """i-th derivative of the modelled function at the base point."""
    if i < 0:
        raise ValueError("derivative index must be >= 0")
    if i > a.order:
        raise OrderExceeded(f"derivative {i} requested from a jet of order {a.order}")
    return float(a.coeffs[i] * _FACTORIALS[i])


# -- elementary functions ----------------------------------------------------

def exp(a):
    if a.coeffs[0] > 709.0:
        raise DomainError(f"exp overflow at value {a.coeffs[0]}")
    return Jet(a.base, kern.series_exp(a.coeffs))


def log(a):
    if not a.coeffs[0] > 0:
        raise DomainError(f"log of nonpositive value {a.coeffs[0]}")
    return Jet(a.base, kern.series_log(a.coeffs))


def sqrt(a):
    if a.coeffs[0] < 0:
        raise DomainError(f"sqrt of negative value {a.coeffs[0]}")
    if a.coeffs[0] == 0 and a.order > 0:
        raise DomainError("sqrt is not differentiable at 0")
    return Jet(a.base, kern.series_sqrt(a.coeffs))


def sin(a):
    s, _ = kern.series_sincos(a.coeffs)
    return Jet(a.base, s)


def cos(a):
    _, c = kern.series_sincos(a.coeffs)
    return Jet(a.base, c)


def tan(a):
    s, c = kern.series_sincos(a.coeffs)
    if c[0] == 0.0:
        raise DomainError(f"tan pole at value {a.coeffs[0]}")
    return Jet(a.base, kern.series_div(s, c))


def power(a, p):
    """``a ** p``; integral ``p`` by repeated squaring, otherwise ``exp(p log a)``."""
    p = float(p)
    if p.is_integer() and abs(p) <= 1 << 20:
        n = int(p)
        if n < 0:
            return _div(jet_constant(1.0, a.base, a.order), _ipow(a, -n))
        return _ipow(a, n)
    if not a.coeffs[0] > 0:
        raise DomainError(f"non-integer power {p} of nonpositive value {a.coeffs[0]}")
    return exp(log(a) * p)


def _ipow(a, n):
    result = jet_constant(1.0, a.base, a.order)
    sq = a
    while n:
        if n & 1:
            result = result * sq
        n >>= 1
        if n:
            sq = sq * sq
    return result


_ELEMENTARY = {"sin": sin, "cos": cos, "tan": tan, "exp": exp, "log": log, "sqrt": sqrt}


def jet_elementary(a, fn, p=None):
    if fn == "pow":
        if p is None:
            raise ValueError("pow needs an exponent")
        return power(a, p)
    try:
        return _ELEMENTARY[fn](a)
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None

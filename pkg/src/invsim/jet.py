"""Second-order forward-mode jets.

A :class:`Jet2` carries a quantity together with its first and second time
derivatives.  Arithmetic and the elementary functions below propagate both
derivative channels with the chain rule, so any formula written with them
yields exact first and second derivatives of its result.

The module-level functions (``sin``, ``cos``, ``sqrt`` ...) accept jets,
plain floats and numpy arrays, which lets the same flight-mechanics formula
serve scalar, vectorised and differentiated evaluation.  Jet components may
themselves be numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "Jet2", "sin", "cos", "sincos", "tan", "sqrt", "exp", "log", "atan2",
    "value_of",
]


def _scalar_or_array(fn_math, fn_np):
    def fn(x):
        try:
            return fn_math(x)
        except TypeError:
            return fn_np(x)
    fn.__name__ = fn_math.__name__
    return fn


_sin = _scalar_or_array(math.sin, np.sin)
_cos = _scalar_or_array(math.cos, np.cos)
_tan = _scalar_or_array(math.tan, np.tan)
_exp = _scalar_or_array(math.exp, np.exp)
_atan2 = _scalar_or_array(lambda y_x: math.atan2(*y_x), lambda y_x: np.arctan2(*y_x))


def _check_nonzero(x, what):
    if x.__class__ is float or x.__class__ is int:
        if x == 0:
            raise DomainError(f"{what}: value is zero")
    elif np.any(np.asarray(x) == 0):
        raise DomainError(f"{what}: value is zero")


def _check_positive(x, what, strict):
    if x.__class__ is float or x.__class__ is int:
        bad = x <= 0 if strict else x < 0
    else:
        arr = np.asarray(x)
        bad = np.any(arr <= 0) if strict else np.any(arr < 0)
    if bad:
        raise DomainError(f"{what}: argument out of domain")


class Jet2:
    """Value with first and second derivatives, ``(f, f', f'')``."""

    __slots__ = ("value", "d1", "d2")

    def __init__(self, value, d1=0.0, d2=0.0):
        self.value = value
        self.d1 = d1
        self.d2 = d2

    @classmethod
    def constant(cls, value):
        return cls(value, 0.0, 0.0)

    @classmethod
    def variable(cls, value):
        """Jet of the independent variable itself (derivative 1)."""
        return cls(value, 1.0, 0.0)

    def __repr__(self):
        return f"Jet2({self.value!r}, {self.d1!r}, {self.d2!r})"

    def __iter__(self):
        yield self.value
        yield self.d1
        yield self.d2

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        if o.__class__ is Jet2:
            return Jet2(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
        return Jet2(self.value + o, self.d1, self.d2)

    __radd__ = __add__

    def __sub__(self, o):
        if o.__class__ is Jet2:
            return Jet2(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
        return Jet2(self.value - o, self.d1, self.d2)

    def __rsub__(self, o):
        return Jet2(o - self.value, -self.d1, -self.d2)

    def __neg__(self):
        return Jet2(-self.value, -self.d1, -self.d2)

    def __pos__(self):
        return self

    def __mul__(self, o):
        if o.__class__ is Jet2:
            a0, a1, a2 = self.value, self.d1, self.d2
            b0, b1, b2 = o.value, o.d1, o.d2
            return Jet2(a0 * b0, a1 * b0 + a0 * b1, a2 * b0 + 2.0 * a1 * b1 + a0 * b2)
        return Jet2(self.value * o, self.d1 * o, self.d2 * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if o.__class__ is Jet2:
            b0 = o.value
            _check_nonzero(b0, "Jet2 division")
            q0 = self.value / b0
            q1 = (self.d1 - q0 * o.d1) / b0
            q2 = (self.d2 - 2.0 * q1 * o.d1 - q0 * o.d2) / b0
            return Jet2(q0, q1, q2)
        _check_nonzero(o, "Jet2 division")
        return Jet2(self.value / o, self.d1 / o, self.d2 / o)

    def __rtruediv__(self, o):
        return Jet2(o, 0.0, 0.0) / self

    def __pow__(self, k):
        if k.__class__ is Jet2:
            return exp(log(self) * k)
        if k == 2:
            return self * self
        u0, u1, u2 = self.value, self.d1, self.d2
        if k != int(k):
            _check_positive(u0, "Jet2 fractional power", strict=True)
        elif k < 0:
            _check_nonzero(u0, "Jet2 negative power")
        f1 = k * u0 ** (k - 1)
        f2 = k * (k - 1) * u0 ** (k - 2) if k != 1 else 0.0
        return Jet2(u0 ** k, f1 * u1, f2 * u1 * u1 + f1 * u2)


def _apply(u, f0, f1, f2):
    """Chain rule for a scalar function with derivatives ``f1``, ``f2``."""
    u1 = u.d1
    return Jet2(f0, f1 * u1, f2 * u1 * u1 + f1 * u.d2)


def value_of(x):
    """Strip derivative channels."""
    return x.value if x.__class__ is Jet2 else x


def sin(x):
    if x.__class__ is Jet2:
        s, c = _sin(x.value), _cos(x.value)
        return _apply(x, s, c, -s)
    return _sin(x)


def cos(x):
    if x.__class__ is Jet2:
        s, c = _sin(x.value), _cos(x.value)
        return _apply(x, c, -s, -c)
    return _cos(x)


def sincos(x):
    """Return ``(sin x, cos x)`` sharing the evaluation of both."""
    if x.__class__ is Jet2:
        s, c = _sin(x.value), _cos(x.value)
        u1, u2 = x.d1, x.d2
        u11 = u1 * u1
        return (Jet2(s, c * u1, -s * u11 + c * u2),
                Jet2(c, -s * u1, -c * u11 - s * u2))
    return _sin(x), _cos(x)


def tan(x):
    if x.__class__ is Jet2:
        t = _tan(x.value)
        sec2 = 1.0 + t * t
        return _apply(x, t, sec2, 2.0 * t * sec2)
    return _tan(x)


def sqrt(x):
    if x.__class__ is Jet2:
        _check_positive(x.value, "Jet2 sqrt", strict=False)
        s0 = _sqrt(x.value)
        _check_nonzero(s0, "Jet2 sqrt derivative")
        s1 = x.d1 / (2.0 * s0)
        return Jet2(s0, s1, (x.d2 - 2.0 * s1 * s1) / (2.0 * s0))
    _check_positive(x, "sqrt", strict=False)
    return _sqrt(x)


_sqrt = _scalar_or_array(math.sqrt, np.sqrt)
_log = _scalar_or_array(math.log, np.log)


def exp(x):
    if x.__class__ is Jet2:
        e = _exp(x.value)
        return _apply(x, e, e, e)
    return _exp(x)


def log(x):
    if x.__class__ is Jet2:
        _check_positive(x.value, "Jet2 log", strict=True)
        inv = 1.0 / x.value
        return _apply(x, _log(x.value), inv, -inv * inv)
    _check_positive(x, "log", strict=True)
    return _log(x)


def atan2(y, x):
    """Four-quadrant arctangent of ``y / x`` for jets or plain values."""
    if y.__class__ is not Jet2 and x.__class__ is not Jet2:
        return _atan2((y, x))
    if y.__class__ is not Jet2:
        y = Jet2(y, 0.0, 0.0)
    if x.__class__ is not Jet2:
        x = Jet2(x, 0.0, 0.0)
    x0, x1, x2 = x.value, x.d1, x.d2
    y0, y1, y2 = y.value, y.d1, y.d2
    r2 = x0 * x0 + y0 * y0
    _check_nonzero(r2, "Jet2 atan2 at the origin")
    num = x0 * y1 - y0 * x1
    d1 = num / r2
    d2 = ((x0 * y2 - y0 * x2) * r2 - num * 2.0 * (x0 * x1 + y0 * y1)) / (r2 * r2)
    return Jet2(_atan2((y0, x0)), d1, d2)

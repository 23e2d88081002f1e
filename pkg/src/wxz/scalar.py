"""Gaussian-rational scalars with a floating-point fallback.

A :class:`Scalar` is either *exact* (real and imaginary parts are
:class:`fractions.Fraction`) or *approximate* (two floats).  Exact op Exact
stays exact; anything touching an approximate value becomes approximate.
Approximate equality uses an absolute tolerance, :data:`TAU` by default.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, ParseError

TAU = 1e-9

_RATIONAL_TYPES = (int, Fraction)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {x!r}") from exc
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot make an exact rational from {type(x).__name__}")


class Scalar:
    """Immutable complex number, exact over Q(i) or approximate."""

    __slots__ = ("re", "im", "exact")

    def __init__(self, re=0, im=0):
        if isinstance(re, _RATIONAL_TYPES + (str,)) and isinstance(im, _RATIONAL_TYPES + (str,)):
            object.__setattr__(self, "re", _to_fraction(re))
            object.__setattr__(self, "im", _to_fraction(im))
            object.__setattr__(self, "exact", True)
        else:
            object.__setattr__(self, "re", float(re))
            object.__setattr__(self, "im", float(im))
            object.__setattr__(self, "exact", False)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- construction -------------------------------------------------

    @classmethod
    def approx(cls, z) -> "Scalar":
        z = complex(z)
        return cls(float(z.real), float(z.imag))

    @classmethod
    def of(cls, x) -> "Scalar":
        """Coerce ints, Fractions, floats, complex numbers and strings."""
        if isinstance(x, Scalar):
            return x
        if isinstance(x, bool):
            return cls(int(x))
        if isinstance(x, _RATIONAL_TYPES):
            return cls(x, 0)
        if isinstance(x, float):
            return cls(x, 0.0)
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        if isinstance(x, str):
            return parse_scalar(x)
        if hasattr(x, "__complex__"):
            return cls.approx(complex(x))
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.exact and other.exact:
            return Scalar(self.re + other.re, self.im + other.im)
        return Scalar(float(self.re) + float(other.re), float(self.im) + float(other.im))

    __radd__ = __add__

    def __neg__(self):
        if self.exact:
            return Scalar(-self.re, -self.im)
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if self.exact and other.exact:
            return Scalar(a * c - b * d, a * d + b * c)
        a, b, c, d = float(a), float(b), float(c), float(d)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.exact:
            n = self.re * self.re + self.im * self.im
            if n == 0:
                raise DivisionByZero("inverse of exact zero")
            return Scalar(self.re / n, -self.im / n)
        if self.is_zero():
            raise DivisionByZero("inverse of approximate zero")
        return Scalar.approx(1 / complex(self))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    # -- inspection ---------------------------------------------------

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        if self.exact:
            return math.sqrt(self.re * self.re + self.im * self.im)
        return math.hypot(self.re, self.im)

    def is_zero(self, tau: float | None = None) -> bool:
        if self.exact:
            return self.re == 0 and self.im == 0
        return abs(self) < (TAU if tau is None else tau)

    def is_real(self) -> bool:
        return self.im == 0 if self.exact else abs(self.im) < TAU

    def __bool__(self):
        return not self.is_zero()

    def close(self, other, tau: float | None = None) -> bool:
        other = Scalar.of(other)
        return (self - other).is_zero(tau)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.exact and other.exact:
            return self.re == other.re and self.im == other.im
        return (self - other).is_zero()

    def __hash__(self):
        if self.exact:
            return hash((self.re, self.im))
        # approximate equality is not transitive; keep hashing consistent with it
        return hash("approx")

    def __repr__(self):
        if self.exact:
            return f"Scalar({_fmt(self.re)!r}, {_fmt(self.im)!r})"
        return f"Scalar.approx({complex(self)!r})"

    def __str__(self):
        if self.exact:
            if self.im == 0:
                return _fmt(self.re)
            if self.re == 0:
                return f"{_fmt(self.im)}i"
            sign = "+" if self.im > 0 else "-"
            return f"{_fmt(self.re)}{sign}{_fmt(abs(self.im))}i"
        return str(complex(self))

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        if self.exact:
            return {"re": _fmt(self.re), "im": _fmt(self.im)}
        return {"re": self.re, "im": self.im, "approx": True}

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return cls.of(obj)
        if isinstance(obj, float):
            return cls(obj, 0.0)
        if not isinstance(obj, dict) or "re" not in obj:
            raise ParseError(f"bad scalar encoding {obj!r}")
        if obj.get("approx"):
            return cls(float(obj["re"]), float(obj.get("im", 0.0)))
        re, im = obj["re"], obj.get("im", "0")
        if isinstance(re, float) or isinstance(im, float):
            raise ParseError(f"exact scalar with float parts {obj!r}")
        return cls(_to_fraction(re), _to_fraction(im))


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, float, complex)):
        return Scalar.of(x)
    return NotImplemented


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"``, ``"p/q+r/s i"``-style literals or Python complex syntax."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty scalar literal")
    if s.endswith("i") or s.endswith("j"):
        body = s[:-1]
        # split at the last sign that is not the leading one
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut > 0 and body[cut - 1] not in "eE/":
            re_part, im_part = body[:cut], body[cut:]
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        try:
            return Scalar(_to_fraction(re_part), _to_fraction(im_part))
        except ParseError:
            try:
                return Scalar.approx(complex(s.replace("i", "j")))
            except ValueError as exc:
                raise ParseError(f"bad scalar literal {text!r}") from exc
    try:
        return Scalar(_to_fraction(s), 0)
    except ParseError:
        try:
            return Scalar(float(s), 0.0)
        except ValueError as exc:
            raise ParseError(f"bad scalar literal {text!r}") from exc


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(a: Scalar) -> Scalar | None:
    """Principal square root of an exact scalar if it lies in Q(i), else None."""
    re, im = a.re, a.im
    if im == 0:
        if re >= 0:
            r = rational_sqrt(re)
            return None if r is None else Scalar(r, 0)
        r = rational_sqrt(-re)
        return None if r is None else Scalar(0, r)
    m = rational_sqrt(re * re + im * im)
    if m is None:
        return None
    x = rational_sqrt((re + m) / 2)
    y = rational_sqrt((m - re) / 2)
    if x is None or y is None:
        return None
    if im < 0:
        y = -y
    return Scalar(x, y)


def scalar_sqrt(a) -> Scalar:
    """Principal square root (nonnegative real part; nonnegative imaginary part on the cut)."""
    a = Scalar.of(a)
    if a.exact:
        root = gaussian_sqrt(a)
        if root is not None:
            return root
    z = cmath.sqrt(complex(a))
    if z.real == 0 and z.imag < 0:
        z = -z
    return Scalar.approx(z)


def scalar_add(a, b) -> Scalar:
    return Scalar.of(a) + Scalar.of(b)


def scalar_mul(a, b) -> Scalar:
    return Scalar.of(a) * Scalar.of(b)


def scalar_neg(a) -> Scalar:
    return -Scalar.of(a)


def scalar_inv(a) -> Scalar:
    return Scalar.of(a).inverse()

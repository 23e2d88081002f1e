"""Exact arithmetic in towers of quadratic extensions of Q(i).

A field ``F(sqrt d)`` is represented by its parent ``F`` and the radicand
``d`` (an element of ``F`` that is not a square there).  Elements are pairs
``a + b*sqrt(d)`` with ``a, b`` in the parent; the base field holds exact
Gaussian rationals.  Towers built by one computation form a chain, so any two
elements live in comparable fields.

``Approx`` mirrors the interface over complex floats, letting the same
algorithm run on inexact input.
"""

from __future__ import annotations

import cmath

from .errors import DivisionByZero
from .scalar import TAU, Scalar, gaussian_sqrt


class Field:
    __slots__ = ("parent", "d", "depth", "_gen")

    def __init__(self, parent: "Field | None" = None, d: "Surd | None" = None):
        self.parent = parent
        self.d = d
        self.depth = 0 if parent is None else parent.depth + 1
        self._gen = None

    def generator_value(self) -> complex:
        """Complex value chosen for sqrt(d): the principal root."""
        if self._gen is None:
            self._gen = cmath.sqrt(self.d.to_complex())
        return self._gen

    def ancestors(self):
        f = self
        while f is not None:
            yield f
            f = f.parent

    def __repr__(self):
        return "Q(i)" if self.parent is None else f"{self.parent!r}(sqrt({self.d}))"


BASE = Field()


class Surd:
    """Element of a quadratic tower over Q(i)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: Field, a, b=None):
        self.field = field
        self.a = a
        self.b = b

    # -- construction ------------------------------------------------------
    @classmethod
    def of(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        s = Scalar.of(x)
        if not s.exact:
            raise TypeError("Surd needs exact input")
        return cls(BASE, s)

    def lift(self, field: Field) -> "Surd":
        if self.field is field:
            return self
        if self.field.depth >= field.depth:
            raise ValueError("cannot lift into a shallower field")
        inner = self.lift(field.parent)
        return Surd(field, inner, _zero(field.parent))

    # -- arithmetic -----------------------------------------------------------
    def _pair(self, other):
        other = other if isinstance(other, Surd) else Surd.of(other)
        f = self.field if self.field.depth >= other.field.depth else other.field
        return self.lift(f), other.lift(f), f

    def __add__(self, other):
        x, y, f = self._pair(other)
        if f is BASE:
            return Surd(f, x.a + y.a)
        return Surd(f, x.a + y.a, x.b + y.b)

    __radd__ = __add__

    def __neg__(self):
        if self.field is BASE:
            return Surd(BASE, -self.a)
        return Surd(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-(other if isinstance(other, Surd) else Surd.of(other)))

    def __rsub__(self, other):
        return Surd.of(other) - self

    def __mul__(self, other):
        x, y, f = self._pair(other)
        if f is BASE:
            return Surd(f, x.a * y.a)
        return Surd(f, x.a * y.a + x.b * y.b * f.d, x.a * y.b + x.b * y.a)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.field is BASE:
            return Surd(BASE, self.a.inverse())
        n = self.a * self.a - self.b * self.b * self.field.d
        ni = n.inverse()
        return Surd(self.field, self.a * ni, -(self.b * ni))

    def __truediv__(self, other):
        other = other if isinstance(other, Surd) else Surd.of(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Surd.of(other) * self.inverse()

    # -- predicates and conversion ------------------------------------------
    def is_zero(self) -> bool:
        if self.field is BASE:
            return self.a.is_zero()
        return self.a.is_zero() and self.b.is_zero()

    def __eq__(self, other):
        if not isinstance(other, (Surd, Scalar, int)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def to_complex(self) -> complex:
        if self.field is BASE:
            return complex(self.a)
        return self.a.to_complex() + self.b.to_complex() * self.field.generator_value()

    def rational(self) -> Scalar | None:
        """The value as an exact Scalar when it lies in Q(i)."""
        if self.field is BASE:
            return self.a
        if not self.b.is_zero():
            return None
        return self.a.rational()

    def to_scalar(self) -> Scalar:
        r = self.rational()
        return r if r is not None else Scalar.approx(self.to_complex())

    def __str__(self):
        if self.field is BASE:
            return str(self.a)
        if self.b.is_zero():
            return str(self.a)
        tail = f"({self.b})*sqrt({self.field.d})"
        return tail if self.a.is_zero() else f"{self.a} + {tail}"

    __repr__ = __str__


def _zero(field: Field) -> Surd:
    return Surd(BASE, Scalar(0)).lift(field)


def sqrt_in_field(x: Surd) -> Surd | None:
    """A square root of ``x`` inside ``x.field``, or None if there is none."""
    f = x.field
    if f is BASE:
        r = gaussian_sqrt(x.a)
        return None if r is None else Surd(BASE, r)
    a, b, d = x.a, x.b, f.d
    if b.is_zero():
        r = sqrt_in_field(a)
        if r is not None:
            return r.lift(f)
        r = sqrt_in_field(a / d)
        return None if r is None else Surd(f, _zero(f.parent), r)
    s = sqrt_in_field(a * a - b * b * d)
    if s is None:
        return None
    half = Surd.of(Scalar(1, 0) / 2)
    for t in ((a + s) * half, (a - s) * half):
        u = sqrt_in_field(t)
        if u is not None and not u.is_zero():
            return Surd(f, u, b / (u * 2))
    return None


def adjoin_sqrt(x: Surd, field: Field) -> tuple:
    """Return ``(root, field')``: a square root of ``x`` and the (possibly extended) working field."""
    x = x.lift(field) if x.field is not field else x
    r = sqrt_in_field(x)
    if r is not None:
        return r, field
    new = Field(field, x)
    return Surd(new, _zero(field), Surd(BASE, Scalar(1)).lift(field)), new


class Approx:
    """Complex float with a tolerance-based zero test (same interface as Surd)."""

    __slots__ = ("z",)
    tau = TAU

    def __init__(self, z):
        self.z = complex(z)

    @classmethod
    def of(cls, x) -> "Approx":
        return x if isinstance(x, Approx) else cls(complex(x))

    def __add__(self, o):
        return Approx(self.z + Approx.of(o).z)

    __radd__ = __add__

    def __sub__(self, o):
        return Approx(self.z - Approx.of(o).z)

    def __rsub__(self, o):
        return Approx(Approx.of(o).z - self.z)

    def __neg__(self):
        return Approx(-self.z)

    def __mul__(self, o):
        return Approx(self.z * Approx.of(o).z)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return Approx(1 / self.z)

    def __truediv__(self, o):
        return self * Approx.of(o).inverse()

    def __rtruediv__(self, o):
        return Approx.of(o) * self.inverse()

    def is_zero(self) -> bool:
        return abs(self.z) < self.tau

    def __eq__(self, o):
        return (self - o).is_zero()

    __hash__ = None

    def to_complex(self) -> complex:
        return self.z

    def rational(self):
        return None

    def to_scalar(self) -> Scalar:
        return Scalar.approx(self.z)

    def __str__(self):
        return str(self.z)

    __repr__ = __str__

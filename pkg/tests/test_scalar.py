from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian
from wxz.errors import DivisionByZero, ParseError
from wxz.scalar import I, ONE, TAU, ZERO, Scalar, gaussian_sqrt, parse_scalar, rational_sqrt, scalar_sqrt


def test_basic_examples():
    assert ONE * I == Scalar(0, 1)
    assert I.inverse() == Scalar(0, -1)
    assert Scalar(Fraction(1, 2), Fraction(1, 3)) + Scalar(Fraction(1, 2), Fraction(-1, 3)) == ONE


def test_fractions_are_reduced():
    s = Scalar(Fraction(6, 8), Fraction(-10, 4))
    assert (s.re.numerator, s.re.denominator) == (3, 4)
    assert (s.im.numerator, s.im.denominator) == (-5, 2)


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        ZERO.inverse()


def test_approx_contagion():
    a = Scalar(1, 2)
    b = Scalar.approx(0.5)
    assert (a + b).exact is False
    assert (a * a).exact is True
    assert (a * b).close(Scalar.approx(0.5 + 1j))


def test_approx_equality_uses_tau():
    assert Scalar.approx(1.0 + TAU / 10) == ONE
    assert Scalar.approx(1.0 + 10 * TAU) != ONE


@pytest.mark.parametrize("value, root", [(4, Scalar(2)), (Fraction(9, 4), Scalar(Fraction(3, 2))),
                                         (-1, I), (Scalar(0, 2), Scalar(1, 1)), (Scalar(-3, 4), Scalar(1, 2))])
def test_exact_square_roots(value, root):
    r = scalar_sqrt(value)
    assert r.exact and r == root


def test_sqrt_of_i_is_principal_and_approx():
    r = scalar_sqrt(I)
    assert not r.exact
    assert r.close(Scalar.approx(cmath.sqrt(1j)))


def test_irrational_sqrt_is_approx():
    r = scalar_sqrt(2)
    assert not r.exact and r.close(Scalar.approx(2 ** 0.5))


@given(gaussian)
def test_gaussian_sqrt_of_square(z):
    r = gaussian_sqrt(z * z)
    assert r is not None
    assert r * r == z * z
    # principal branch: nonnegative real part
    assert r.re > 0 or (r.re == 0 and r.im >= 0)


@given(gaussian)
def test_gaussian_sqrt_agrees_with_sympy(z):
    r = gaussian_sqrt(z)
    expr = sp.sqrt(sp.Rational(z.re) + sp.I * sp.Rational(z.im))
    re, im = sp.radsimp(sp.re(expr)), sp.radsimp(sp.im(expr))
    in_field = re.is_Rational and im.is_Rational
    assert (r is not None) == bool(in_field)
    if r is not None:
        assert complex(r) == pytest.approx(complex(expr))


@given(st.fractions(min_value=0, max_value=100, max_denominator=50))
def test_rational_sqrt(q):
    r = rational_sqrt(q)
    if r is None:
        assert not sp.sqrt(sp.Rational(q)).is_Rational
    else:
        assert r * r == q


@given(gaussian, gaussian, gaussian)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@given(gaussian)
def test_json_round_trip(a):
    assert Scalar.from_json(a.to_json()) == a
    b = Scalar.approx(complex(a) + 0.125)
    assert Scalar.from_json(b.to_json()).close(b)


@pytest.mark.parametrize("text, value", [("3/4", Scalar(Fraction(3, 4))), ("1/2+3i", Scalar(Fraction(1, 2), 3)),
                                         ("-i", Scalar(0, -1)), ("2-1/3i", Scalar(2, Fraction(-1, 3))),
                                         ("5", Scalar(5))])
def test_parse(text, value):
    assert parse_scalar(text) == value


def test_parse_error():
    with pytest.raises(ParseError):
        parse_scalar("abc")

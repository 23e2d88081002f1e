from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings

from conftest import matrices
from wxz.canonical import FORMS, first_form, matches_form, reduce_canonical
from wxz.catalog import Sampler
from wxz.errors import DimensionMismatch
from wxz.numfield import BASE, Approx, Surd, adjoin_sqrt, sqrt_in_field
from wxz.scalar import Scalar
from wxz.tensor import ONE2, ONE4, SquareMatrix, kron


def test_surd_arithmetic_against_sympy():
    r2, f2 = adjoin_sqrt(Surd.of(2), BASE)
    r3, f3 = adjoin_sqrt(Surd.of(3), f2)
    x = r2 + r3 * Scalar(F(1, 2), 1)
    y = (x * x - 5) / (r2 - r3)
    sx = sp.sqrt(2) + sp.sqrt(3) * (sp.Rational(1, 2) + sp.I)
    sy = (sx ** 2 - 5) / (sp.sqrt(2) - sp.sqrt(3))
    assert abs(y.to_complex() - complex(sp.N(sy, 30))) < 1e-12
    assert (y * y.inverse()) == 1
    assert f3.depth == 2


def test_denesting():
    r2, f = adjoin_sqrt(Surd.of(2), BASE)
    x = r2 * 2 + 3  # (1 + sqrt 2)^2
    root = sqrt_in_field(x)
    assert root is not None and root * root == x
    r, g = adjoin_sqrt(Surd.of(-1), f)
    assert g is f and r * r == -1  # i is already in Q(i)
    assert sqrt_in_field(r2) is None


def test_approx_interface():
    a = Approx(1 + 1e-12)
    assert (a - 1).is_zero() and (a * 2).to_scalar() == Scalar.approx(2)


def test_form_patterns_are_consistent():
    assert sorted(FORMS) == list(range(1, 15))
    assert all(len(rows) == 4 and all(len(r.split()) == 4 for r in rows) for rows in FORMS.values())
    m = SquareMatrix([[1, 0, 2, 0], [0, 3, 0, 2], [4, 0, 5, 0], [0, 4, 0, 5]])
    assert matches_form(m, 13) and first_form(m) == 13


def test_already_canonical_input():
    m = SquareMatrix([[1, 0, 2, 0], [0, 3, 0, 2], [4, 0, 5, 0], [0, 4, 0, 5]])
    red = reduce_canonical(m)
    assert red.form_index == 13
    assert red.lam == Scalar(1)
    assert red.roundtrip()


def test_split_upper_right_block():
    mu1, mu2 = Scalar(5), Scalar(2)
    block = SquareMatrix([[5, 0], [0, 2]])
    s = SquareMatrix([[1, 1], [1, 2]])
    ur = s @ block @ s.inverse()
    m = SquareMatrix([[1, 2, ur[0, 0], ur[0, 1]], [3, 4, ur[1, 0], ur[1, 1]], [5, 6, 7, 8], [9, 1, 2, 3]])
    red = reduce_canonical(m)
    alpha = (mu1 + mu2) / (mu1 - mu2)
    assert red.form_index == 1
    assert red.lam == Scalar(2) / (mu1 - mu2)
    got = {red.canonical[0, 2], red.canonical[1, 3]}
    assert got == {alpha + 1, alpha - 1}
    assert red.roundtrip()


def test_irrational_eigenvalues_stay_exact():
    m = SquareMatrix([[1, 2, 1, 1], [3, 4, 1, 0], [5, 6, 7, 8], [9, 1, 2, 3]])  # x^2 - x - 1
    red = reduce_canonical(m)
    assert red.exact and red.tower_depth >= 1 and red.roundtrip()
    assert "symbolic" in red.to_json()
    again = reduce_canonical(red.canonical_elements())
    assert again.form_index == red.form_index


def test_inexact_input():
    m = SquareMatrix.from_complex([[1, 2, 1, 1], [3, 4, 1, 0], [5, 6, 7, 8], [9, 1, 2, 3]])
    red = reduce_canonical(m)
    assert not red.exact and red.roundtrip()
    one_s = kron(ONE2, red.s)
    assert (one_s @ m @ one_s.inverse()).scale(red.lam).close(red.canonical)


def test_dimension_error():
    with pytest.raises(DimensionMismatch):
        reduce_canonical(ONE2)


def test_a_families_reduce_to_their_own_form(catalog):
    sampler = Sampler(catalog, seed=1)
    from wxz.catalog.sampling import _family_entry
    for k in range(1, 15):
        fam = catalog.family(f"A_{k}")
        for j in range(3):
            a = sampler.sample(_family_entry(fam), j).matrices["R"]
            assert reduce_canonical(a).form_index == k, (k, a)


def test_x_family_instance(catalog):
    x = catalog.family("X_2")(*[Scalar(v) for v in (2, 3, 5, 7)][: len(catalog.family("X_2").params)])
    red = reduce_canonical(x)
    assert 1 <= red.form_index <= 14 and red.roundtrip()


def test_scalar_input():
    red = reduce_canonical(ONE4.scale(3))
    assert red.form_index == 13 and red.roundtrip()


@settings(max_examples=60, deadline=None)
@given(matrices(4))
def test_roundtrip_and_idempotence(m):
    red = reduce_canonical(m)
    assert 1 <= red.form_index <= 14
    assert red.roundtrip()
    assert reduce_canonical(red.canonical_elements()).form_index == red.form_index


def test_random_integer_matrices():
    rng = random.Random(0)
    for _ in range(40):
        m = SquareMatrix([[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])
        red = reduce_canonical(m)
        assert red.roundtrip()
        assert matches_form(red.canonical_elements(), red.form_index)

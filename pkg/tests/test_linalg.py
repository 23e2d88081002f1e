from __future__ import annotations

import random
from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from wxz import linalg

gint = st.tuples(st.integers(-3, 3), st.integers(-2, 2))


def _sympy(rows):
    return sp.Matrix([[a + sp.I * b for a, b in row] for row in rows])


@settings(max_examples=60)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rank_matches_sympy(nr, nc, data):
    rows = [[data.draw(gint) for _ in range(nc)] for _ in range(nr)]
    assert linalg.rank(rows) == _sympy(rows).rank()


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_nullspace_is_sound_and_complete(nr, nc, data):
    rows = [[data.draw(gint) for _ in range(nc)] for _ in range(nr)]
    basis = linalg.nullspace(rows, nc)
    m = _sympy(rows)
    assert len(basis) == nc - m.rank()
    for vec in basis:
        v = sp.Matrix([sp.Rational(a) + sp.I * sp.Rational(b) for a, b in vec])
        assert sp.expand(m * v) == sp.zeros(nr, 1)


def test_rank_deficient_example():
    rows = [[(1, 0), (2, 0), (3, 0)], [(2, 0), (4, 0), (6, 0)], [(0, 1), (0, 2), (0, 3)]]
    assert linalg.rank(rows) == 1
    assert len(linalg.nullspace(rows, 3)) == 2


def test_empty_system_has_full_nullspace():
    basis = linalg.nullspace([], 3)
    assert len(basis) == 3
    assert basis[1][1] == (Fraction(1), Fraction(0))


def test_large_random_ranks():
    rng = random.Random(3)
    for _ in range(10):
        rows = [[(rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(16)] for _ in range(20)]
        assert linalg.rank(rows) == _sympy(rows).rank()

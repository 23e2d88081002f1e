from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import strategies as st

from wxz.catalog import load_catalog

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
from wxz.scalar import Scalar
from wxz.tensor import SquareMatrix


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


small_fraction = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 4))
gaussian = st.builds(Scalar, small_fraction, small_fraction)
real_small = st.builds(Scalar, small_fraction)


def matrices(n: int, elements=gaussian):
    return st.lists(st.lists(elements, min_size=n, max_size=n), min_size=n, max_size=n).map(SquareMatrix)


# -- sympy oracles (independent of the package's own arithmetic) ----------------

def to_sympy(m: SquareMatrix) -> sp.Matrix:
    return sp.Matrix(m.dim, m.dim, lambda r, c: sp.Rational(m[r, c].re) + sp.I * sp.Rational(m[r, c].im))


def sp_embed(r: sp.Matrix, slot: str) -> sp.Matrix:
    """Brute-force index placement of a 4x4 matrix on two of three tensor factors."""
    a, b = int(slot[0]) - 1, int(slot[1]) - 1
    out = sp.zeros(8, 8)
    for i in range(8):
        for j in range(8):
            ib = [(i >> (2 - k)) & 1 for k in range(3)]
            jb = [(j >> (2 - k)) & 1 for k in range(3)]
            other = ({0, 1, 2} - {a, b}).pop()
            if ib[other] != jb[other]:
                continue
            out[i, j] = r[2 * ib[a] + ib[b], 2 * jb[a] + jb[b]]
    return out


def sp_commutator(r, s, t) -> sp.Matrix:
    r, s, t = (to_sympy(x) if isinstance(x, SquareMatrix) else x for x in (r, s, t))
    return sp.expand(sp_embed(r, "12") * sp_embed(s, "13") * sp_embed(t, "23")
                     - sp_embed(t, "23") * sp_embed(s, "13") * sp_embed(r, "12"))


def sp_is_zero(m: sp.Matrix) -> bool:
    return all(sp.simplify(x) == 0 for x in m)


def sp_rank(m: sp.Matrix) -> int:
    """Rank over Q(i) via sympy's domain matrices (avoids symbolic simplification)."""
    from sympy.polys.domains import QQ_I
    from sympy.polys.matrices import DomainMatrix

    return DomainMatrix.from_Matrix(m).convert_to(QQ_I).rank()

from __future__ import annotations

import random

import pytest
import sympy as sp

from conftest import sp_commutator, sp_rank, sp_is_zero, to_sympy
from wxz.errors import ConstraintViolated, ParseError, PreconditionViolated, SingularMatrix
from wxz.solver import (LinearSystem, check_triple, derive_from_qr, in_span, solve_w_linear, solve_z_linear,
                        ybe_filter, ybe_search)
from wxz.tensor import ONE4, P, SquareMatrix, yb_commutator


def _random_x(rng, zeros=0.5):
    return SquareMatrix([[0 if rng.random() < zeros else rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])


def _sympy_nullity(x, unknown):
    """Nullity of the linear map Z -> [X,X,Z] (or W -> [W,X,X]) built with sympy."""
    cols = []
    for i in range(4):
        for j in range(4):
            e = SquareMatrix([[int((r, c) == (i, j)) for c in range(4)] for r in range(4)])
            m = sp_commutator(x, x, e) if unknown == "Z" else sp_commutator(e, x, x)
            cols.append(list(m))
    return 16 - sp_rank(sp.Matrix(cols).T)


def test_system_shape_and_row_order():
    x = SquareMatrix.diag([1, 2, 3, 5])
    system = LinearSystem.build(x, "Z")
    assert system.shape == (64, 16)
    z = SquareMatrix([[r * 4 + c for c in range(4)] for r in range(4)])
    flat = yb_commutator(x, x, z).entries()
    assert system.apply(z) == list(flat)
    with pytest.raises(ParseError):
        LinearSystem.build(x, "Q")


def test_identity_gives_everything():
    assert len(solve_z_linear(ONE4)) == 16
    assert len(solve_w_linear(ONE4)) == 16


def test_diagonal_x():
    basis = solve_z_linear(SquareMatrix.diag([1, 2, 3, 5]))
    assert len(basis) == _sympy_nullity(SquareMatrix.diag([1, 2, 3, 5]), "Z") == 6
    five_vertex = SquareMatrix([[1, 0, 0, 0], [0, 2, 0, 0], [0, 7, 3, 0], [0, 0, 0, 5]])
    assert in_span(five_vertex, basis)


def test_flip_in_w_space():
    assert in_span(P, solve_w_linear(P))


def test_eight_vertex_pattern_in_w_space():
    x = SquareMatrix.diag([1, 1, 1, -1])
    basis = solve_w_linear(x)
    assert len(basis) == 8
    eight = SquareMatrix([[1, 0, 0, 2], [0, 3, 4, 0], [0, 5, 6, 0], [7, 0, 0, 8]])
    assert in_span(eight, basis)


@pytest.mark.parametrize("seed", range(8))
def test_rank_nullity_against_sympy(seed):
    rng = random.Random(seed)
    x = _random_x(rng)
    for unknown, solve in (("Z", solve_z_linear), ("W", solve_w_linear)):
        system = LinearSystem.build(x, unknown)
        basis = solve(x)
        assert system.rank() + len(basis) == 16
        assert len(basis) == _sympy_nullity(x, unknown)
        for b in basis:
            m = yb_commutator(x, x, b) if unknown == "Z" else yb_commutator(b, x, x)
            assert m.is_zero()
            assert sp_is_zero(sp_commutator(x, x, b) if unknown == "Z" else sp_commutator(b, x, x))


def test_approx_path_agrees():
    rng = random.Random(4)
    x = _random_x(rng, zeros=0.6)
    xa = SquareMatrix.from_complex(x.to_complex())
    assert len(LinearSystem.build(xa).nullspace()) == len(solve_z_linear(x))
    for b in LinearSystem.build(xa).nullspace():
        assert yb_commutator(xa, xa, b).max_abs() < 1e-9


def test_in_span_negative():
    basis = solve_z_linear(SquareMatrix.diag([1, 2, 3, 5]))
    assert not in_span(SquareMatrix([[0, 1, 0, 0]] + [[0] * 4] * 3), basis)
    assert in_span(SquareMatrix.zero(4), [])


def test_ybe_filter(catalog):
    bad = SquareMatrix([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    r03 = catalog.family("R_0.3")()
    kept = ybe_filter([ONE4, P, bad, r03])
    assert kept == [ONE4, P, r03]
    assert ybe_filter([SquareMatrix.zero(4)], require_invertible=True) == []


def test_ybe_search_reports_patterns():
    found = ybe_search(SquareMatrix.diag([1, 2, 3, 5]), "Z", samples=10)
    assert found["dimension"] == 6
    assert found["solutions"]["diagonal"]
    for sols in found["solutions"].values():
        assert all(yb_commutator(m, m, m).is_zero() for m in sols)


def test_derive_from_qr_flip():
    first, second = derive_from_qr(P, P)
    for t in (first, second):
        assert (t.w, t.x, t.z) == (P, P, P)


def test_derive_from_qr_identity_q(catalog):
    r = catalog.family("R_3.1")(2, 3, 5)
    first, second = derive_from_qr(ONE4, r)
    assert second.z == r.plus() @ r.inverse()
    assert first.residual().passed() and second.residual().passed()
    assert check_triple(first.w, first.x, first.z).report.exact


def test_derive_from_qr_second_image_can_fail(catalog):
    r = catalog.family("R_2.1")(2, 3)
    first, _ = derive_from_qr(r, r, check=False)
    assert first.residual().passed()
    with pytest.raises(ConstraintViolated):
        derive_from_qr(r, r)


def test_derive_from_qr_identity_q_needs_preconditions(catalog):
    # [1, R, R] = R13 R23 - R23 R13 does not vanish for a generic YBE solution
    with pytest.raises(PreconditionViolated, match=r"\[Q,R,R\]"):
        derive_from_qr(ONE4, catalog.family("R_2.1")(2, 3))


def test_derive_from_qr_errors():
    bad = SquareMatrix([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(PreconditionViolated, match=r"\[R,R,R\]"):
        derive_from_qr(ONE4, bad)
    with pytest.raises(SingularMatrix):
        derive_from_qr(ONE4, SquareMatrix.zero(4))


def test_check_triple_examples(catalog):
    res = check_triple(P, ONE4, P)
    assert res.passed()
    assert res.invertible == {"W": True, "X": True, "Z": True}
    # P^t2 has rank one, so P is not second invertible
    assert res.second_invertible == {"W": False, "Z": False}
    assert not check_triple(P, ONE4, P, require_second_inverse=True).passed()
    w, z = catalog.family("R_3.1")(2, 3, 5), catalog.family("R_1.3")(1)
    res = check_triple(w, ONE4, z, require_second_inverse=True)
    assert res.report.max_residual == 0 and res.passed()
    doc = res.to_json()
    assert doc["residuals"] == {"WWW": "0", "ZZZ": "0", "WXX": "0", "XXZ": "0"} and doc["passed"]


def test_check_triple_perturbed(catalog):
    w = catalog.family("R_3.1")(2, 3, 5)
    rows = [[w[r, c] for c in range(4)] for r in range(4)]
    rows[1][2] = rows[1][2] + 1
    res = check_triple(SquareMatrix(rows), ONE4, catalog.family("R_1.3")(1))
    assert not res.passed() and res.report.max_residual > 0


def test_solver_residual_oracle_on_catalog(catalog):
    from wxz.catalog import Sampler
    sampler = Sampler(catalog, seed=3)
    for e in catalog.entries("xxz", expand=True)[::25]:
        r = sampler.sample(e, 1)
        if r.exact:
            x = r.matrices["X"]
            assert in_span(r.matrices["Z"], solve_z_linear(x))
            assert to_sympy(x).shape == (4, 4)

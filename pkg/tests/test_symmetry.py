from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import matrices
from wxz.errors import HypothesisViolated, ParseError, SingularMatrix
from wxz.scalar import Scalar
from wxz.symmetry import (ContinuousSym, DiscreteSym, LemmaSym, all_discrete, apply_continuous, apply_discrete,
                          apply_lemma1, apply_lemma2, apply_symmetry, orbit_sample, random_continuous,
                          random_symmetry, sharp, symmetry_from_json)
from wxz.tensor import ONE2, ONE4, P, SIGMA, SquareMatrix, WXZTriple, is_invertible

T_PP = WXZTriple(P, ONE4, P)


def _verified(t: WXZTriple) -> bool:
    return t.residual().passed()


@pytest.fixture
def generic1(catalog):
    return WXZTriple(catalog.family("R_3.1")(2, 3, 5), ONE4, catalog.family("R_1.3")(1))


def test_identity_continuous(generic1):
    ident = ContinuousSym(ONE2, ONE2)
    out = apply_continuous(ident, generic1)
    assert (out.w, out.x, out.z) == (generic1.w, generic1.x, generic1.z)


def test_continuous_examples(catalog):
    r21 = catalog.family("R_2.1")(2, 3)
    out = apply_continuous(ContinuousSym(SIGMA, SIGMA), WXZTriple(r21.plus(), ONE4, P))
    assert out.w == r21
    r12 = catalog.family("R_1.2")
    t = SquareMatrix.diag([1, 2])  # sqrt(s) with s = 4
    out = apply_continuous(ContinuousSym(t, ONE2), WXZTriple(r12(4).inverse(), ONE4, P))
    assert out.w == r12(F(1, 4))


def test_continuous_validation():
    with pytest.raises(SingularMatrix):
        ContinuousSym(SquareMatrix([[1, 1], [1, 1]]), ONE2)
    with pytest.raises(Exception):
        ContinuousSym(ONE2, ONE2, omega=0)
    with pytest.raises(ParseError):
        ContinuousSym(ONE4, ONE2)


def test_composition_closure(generic1):
    rng = random.Random(1)
    for _ in range(10):
        s1, s2 = random_continuous(rng), random_continuous(rng)
        a = apply_continuous(s2, apply_continuous(s1, generic1))
        b = apply_continuous(s2.after(s1), generic1)
        assert (a.w, a.x, a.z) == (b.w, b.x, b.z)


def test_discrete_validation():
    with pytest.raises(ParseError):
        DiscreteSym("HASH_WZ", "+", "id")
    with pytest.raises(ParseError):
        DiscreteSym("TRANSPOSE_ALL", "id", "id")
    with pytest.raises(ParseError):
        DiscreteSym("ROTATE")
    assert len(all_discrete()) == 14


@pytest.mark.parametrize("op", all_discrete(), ids=lambda o: f"{o.tag}-{o.a}-{o.b}")
def test_each_discrete_op_preserves_solutions(op, catalog):
    base = WXZTriple(catalog.family("R_2.1")(2, 3), catalog.family("R_2.1")(2, 3), catalog.family("R_2.1")(2, 3))
    for t in (base, WXZTriple(catalog.family("R_3.1")(2, 3, 5), ONE4, catalog.family("R_1.3")(1))):
        assert _verified(t)
        assert _verified(apply_discrete(op, t))


def test_swap_example(generic1):
    out = apply_discrete(DiscreteSym("SWAP_WZ", "+", "+"), generic1)
    assert out.w == generic1.z.plus() and out.z == generic1.w.plus() and out.x == generic1.x.plus()
    assert _verified(out)


def test_discrete_involutions(generic1):
    for tag in ("TRANSPOSE_ALL", "ANTIDIAG"):
        op = DiscreteSym(tag)
        twice = apply_discrete(op, apply_discrete(op, generic1))
        assert (twice.w, twice.x, twice.z) == (generic1.w, generic1.x, generic1.z)


@settings(max_examples=40, deadline=None)
@given(matrices(4))
def test_sharp_two_ways(m):
    if is_invertible(m):
        assert sharp(m) == m.inverse().plus()
        assert m.inverse().inverse() == m
    assert m.plus().plus() == m


def test_lemma_trivial_data(generic1):
    for variant in ("left-X", "right-X", "conj-W"):
        out = apply_lemma1(ONE2, ONE2, variant, generic1)
        assert (out.w, out.x, out.z) == (generic1.w, generic1.x, generic1.z)
    for variant in ("left-X", "right-X", "conj-Z"):
        out = apply_lemma2(ONE2, ONE2, variant, generic1)
        assert (out.w, out.x, out.z) == (generic1.w, generic1.x, generic1.z)


def test_lemma1_diagonal_example(generic1):
    t = SquareMatrix.diag([1, 7])
    out = apply_lemma1(t, t, "left-X", generic1)
    # T acts on the first tensor factor of X
    assert out.x == SquareMatrix.diag([1, 1, 7, 7])
    assert _verified(out)
    assert _verified(apply_lemma1(t, t, "conj-W", generic1))


def test_lemma1_eight_vertex(catalog):
    w = catalog.family("R_1.4")(2)
    t = SquareMatrix.diag([1, -1])
    triple = WXZTriple(w, ONE4, catalog.family("R_1.3")(1))
    assert _verified(triple)
    for variant in ("left-X", "right-X", "conj-W"):
        assert _verified(apply_lemma1(t, t, variant, triple))


def test_lemma2_examples(catalog):
    s = SquareMatrix([[2, 1], [1, 3]])
    for variant in ("left-X", "right-X", "conj-Z"):
        assert _verified(apply_lemma2(s, s, variant, T_PP))
    z = catalog.family("R_3.1")(3, 3, 1)
    triple = WXZTriple(catalog.family("R_2.1")(2, 3), ONE4, z)
    assert _verified(triple)
    c = SquareMatrix.diag([1, 5])
    for variant in ("left-X", "right-X", "conj-Z"):
        assert _verified(apply_lemma2(c, c, variant, triple))


def test_lemma_gating(catalog):
    triple = WXZTriple(catalog.family("R_2.1")(2, 3), ONE4, catalog.family("R_1.3")(1))
    swap = SIGMA
    with pytest.raises(HypothesisViolated, match="W"):
        apply_lemma1(SquareMatrix([[1, 1], [0, 1]]), ONE2, "left-X", triple)
    with pytest.raises(HypothesisViolated):
        # hypothesis on X fails: A differs from T while X = 1
        apply_lemma1(SquareMatrix.diag([1, 2]), ONE2, "left-X", triple)
    with pytest.raises(HypothesisViolated):
        apply_lemma2(SquareMatrix([[1, 1], [0, 1]]), ONE2, "conj-Z", triple)
    x = SquareMatrix([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(HypothesisViolated, match="X"):
        apply_lemma2(swap, swap, "conj-Z", WXZTriple(P, x, P))
    with pytest.raises(ParseError):
        apply_lemma1(ONE2, ONE2, "conj-Z", triple)


def test_orbit_examples(catalog):
    assert orbit_sample(T_PP, 0) == [T_PP]
    walk = orbit_sample(T_PP, 3, seed=4)
    assert len(walk) == 4
    assert all(t.residual().exact and t.residual().passed() for t in walk)
    g1 = catalog.entries("generic", expand=True)[0]
    from wxz.catalog import Sampler
    start = Sampler(catalog, seed=0).sample(g1, 0).triple()
    assert all(_verified(t) for t in orbit_sample(start, 5, seed=9))


def test_orbit_is_deterministic():
    a = [t.to_json() for t in orbit_sample(T_PP, 4, seed=2)]
    b = [t.to_json() for t in orbit_sample(T_PP, 4, seed=2)]
    assert a == b


def test_orbit_rejects_unverified():
    bad = WXZTriple(SquareMatrix([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), ONE4, P)
    with pytest.raises(HypothesisViolated):
        orbit_sample(bad, 2)


def test_json_replay(generic1):
    rng = random.Random(8)
    cur = generic1
    for _ in range(25):
        op = random_symmetry(rng, cur)
        try:
            expected = apply_symmetry(op, cur)
        except SingularMatrix:
            continue
        again = apply_symmetry(symmetry_from_json(op.to_json()), cur)
        assert (again.w, again.x, again.z) == (expected.w, expected.x, expected.z)
        assert _verified(expected)
        cur = expected
    with pytest.raises(ParseError):
        symmetry_from_json({"kind": "rotation"})
    assert isinstance(symmetry_from_json(LemmaSym(1, ONE2, ONE2, "left-X").to_json()), LemmaSym)
    assert symmetry_from_json(ContinuousSym(ONE2, SIGMA, Scalar(2)).to_json()).omega == Scalar(2)

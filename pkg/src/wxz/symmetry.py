"""Symmetries of the WXZ solution set.

Continuous: conjugation by ``T x T``, ``T x S``, ``S x S`` with independent
scalings.  Discrete: transposition, the ``#``/``+``/``-`` families, the W/Z
swap and the antidiagonal transposition.  Conditional: the two lemmas acting
with ``T x 1`` (or ``S x 1``); their hypotheses are checked before use.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstraintViolated, HypothesisViolated, ParseError, SingularMatrix
from .scalar import ONE, Scalar
from .tensor import ONE2, SquareMatrix, WXZTriple, is_invertible, kron

DISCRETE_TAGS = ("TRANSPOSE_ALL", "HASH_WZ", "FLIPINV_WZ", "SWAP_WZ", "ANTIDIAG")
HASH_ARGS = ("id", "#")
SIGN_ARGS = ("+", "-")
LEMMA_VARIANTS = ("left-X", "right-X", "conj-W")
LEMMA2_VARIANTS = ("left-X", "right-X", "conj-Z")


def _need_2x2(m: SquareMatrix, name: str):
    if not isinstance(m, SquareMatrix) or m.dim != 2:
        raise ParseError(f"{name} must be a 2x2 matrix")


def _unary(y: SquareMatrix, op: str) -> SquareMatrix:
    if op == "id":
        return y
    if op == "+":
        return y.plus()
    if op == "-":
        return y.inverse()
    if op == "#":
        return y.plus().inverse()
    raise ValueError(f"unknown unary operation {op!r}")


def sharp(y: SquareMatrix) -> SquareMatrix:
    """``Y^# = (Y^+)^-``."""
    return y.plus().inverse()


@dataclass(frozen=True)
class ContinuousSym:
    """``W -> w (TxT) W (TxT)^-1``, ``X -> x (TxS) X (TxS)^-1``, ``Z -> z (SxS) Z (SxS)^-1``."""

    t: SquareMatrix
    s: SquareMatrix
    omega: Scalar = ONE
    xi: Scalar = ONE
    zeta: Scalar = ONE

    def __post_init__(self):
        _need_2x2(self.t, "t")
        _need_2x2(self.s, "s")
        for name in ("omega", "xi", "zeta"):
            v = Scalar.of(getattr(self, name))
            object.__setattr__(self, name, v)
            if v.is_zero():
                raise ConstraintViolated(f"{name} != 0", "continuous symmetry")
        for name in ("t", "s"):
            if not is_invertible(getattr(self, name)):
                raise SingularMatrix(f"{name} is singular")

    def after(self, first: "ContinuousSym") -> "ContinuousSym":
        """The single symmetry equal to applying ``first`` and then ``self``."""
        return ContinuousSym(self.t @ first.t, self.s @ first.s, self.omega * first.omega,
                             self.xi * first.xi, self.zeta * first.zeta)

    def to_json(self) -> dict:
        return {"kind": "continuous", "t": self.t.to_json(), "s": self.s.to_json(),
                "omega": self.omega.to_json(), "xi": self.xi.to_json(), "zeta": self.zeta.to_json()}


@dataclass(frozen=True)
class DiscreteSym:
    tag: str
    a: str | None = None
    b: str | None = None

    def __post_init__(self):
        if self.tag not in DISCRETE_TAGS:
            raise ParseError(f"unknown discrete symmetry {self.tag!r}")
        allowed = {"HASH_WZ": HASH_ARGS, "FLIPINV_WZ": SIGN_ARGS, "SWAP_WZ": SIGN_ARGS}.get(self.tag)
        if allowed is None:
            if self.a is not None or self.b is not None:
                raise ParseError(f"{self.tag} takes no parameters")
        elif self.a not in allowed or self.b not in allowed:
            raise ParseError(f"{self.tag} parameters must be drawn from {allowed}")

    def to_json(self) -> dict:
        out = {"kind": "discrete", "tag": self.tag}
        if self.a is not None:
            out["params"] = [self.a, self.b]
        return out


def all_discrete() -> list:
    out = [DiscreteSym("TRANSPOSE_ALL"), DiscreteSym("ANTIDIAG")]
    out += [DiscreteSym("HASH_WZ", a, b) for a in HASH_ARGS for b in HASH_ARGS]
    out += [DiscreteSym(tag, c, d) for tag in ("FLIPINV_WZ", "SWAP_WZ") for c in SIGN_ARGS for d in SIGN_ARGS]
    return out


def apply_continuous(sym: ContinuousSym, triple: WXZTriple) -> WXZTriple:
    tt, ts, ss = kron(sym.t, sym.t), kron(sym.t, sym.s), kron(sym.s, sym.s)
    return WXZTriple(
        (tt @ triple.w @ tt.inverse()).scale(sym.omega),
        (ts @ triple.x @ ts.inverse()).scale(sym.xi),
        (ss @ triple.z @ ss.inverse()).scale(sym.zeta),
    )


def apply_discrete(sym: DiscreteSym, triple: WXZTriple) -> WXZTriple:
    w, x, z = triple.w, triple.x, triple.z
    if sym.tag == "TRANSPOSE_ALL":
        return WXZTriple(w.transpose(), x.transpose(), z.transpose())
    if sym.tag == "ANTIDIAG":
        return WXZTriple(w.at(), x.at(), z.at())
    if sym.tag == "HASH_WZ":
        return WXZTriple(_unary(w, sym.a), x, _unary(z, sym.b))
    if sym.tag == "FLIPINV_WZ":
        return WXZTriple(_unary(w, sym.a), x.inverse(), _unary(z, sym.b))
    return WXZTriple(_unary(z, sym.a), x.plus(), _unary(w, sym.b))


def _commutes(m: SquareMatrix, n: SquareMatrix) -> bool:
    return _equal(m @ n, n @ m)


def _equal(a: SquareMatrix, b: SquareMatrix) -> bool:
    return a == b if a.exact and b.exact else a.close(b)


def _intertwines(x: SquareMatrix, t1: SquareMatrix, a1: SquareMatrix) -> bool:
    """``X t1 = a1 X``  or  ``t1 X = X a1``."""
    return _equal(x @ t1, a1 @ x) or _equal(t1 @ x, x @ a1)


def _conditional(side: str, t: SquareMatrix, a: SquareMatrix, variant: str, triple: WXZTriple) -> WXZTriple:
    _need_2x2(t, "t" if side == "W" else "s")
    _need_2x2(a, "a")
    allowed = LEMMA_VARIANTS if side == "W" else LEMMA2_VARIANTS
    if variant not in allowed:
        raise ParseError(f"variant must be one of {allowed}")
    m = triple.w if side == "W" else triple.z
    name = "T" if side == "W" else "S"
    if not _commutes(m, kron(t, t)):
        raise HypothesisViolated(f"[{side}, {name}x{name}] = 0")
    # T acts on the W-space factor of X (the first), S on the Z-space factor.
    if side == "W":
        t1, a1, on, tx = kron(t, ONE2), kron(a, ONE2), f"({name}x1)", "(Ax1)"
    else:
        t1, a1, on, tx = kron(ONE2, t), kron(ONE2, a), f"(1x{name})", "(1xA)"
    if not _intertwines(triple.x, t1, a1):
        raise HypothesisViolated(f"X{on} = {tx}X or {on}X = X{tx}")
    if variant == "left-X":
        return triple.replace(x=t1 @ triple.x)
    if variant == "right-X":
        return triple.replace(x=triple.x @ t1)
    if not _commutes(triple.x, t1):
        raise HypothesisViolated(f"[X, {on}] = 0")
    if not is_invertible(t):
        raise SingularMatrix(f"{name} is singular")
    # twist by the one-sided factor: (1xT) W (Tx1)^-1, resp. (1xS) Z (Sx1)^-1
    conj = kron(ONE2, t) @ m @ kron(t, ONE2).inverse()
    return triple.replace(w=conj) if side == "W" else triple.replace(z=conj)


def apply_lemma1(t: SquareMatrix, a: SquareMatrix, variant: str, triple: WXZTriple) -> WXZTriple:
    """Conditional symmetry driven by ``[W, TxT] = 0``.

    ``left-X``/``right-X`` multiply X by ``Tx1``; ``conj-W`` additionally needs
    ``[X, Tx1] = 0`` and maps W to ``(1xT) W (Tx1)^-1``.
    """
    return _conditional("W", t, a, variant, triple)


def apply_lemma2(s: SquareMatrix, a: SquareMatrix, variant: str, triple: WXZTriple) -> WXZTriple:
    """Conditional symmetry driven by ``[Z, SxS] = 0``; S acts on the second factor of X."""
    return _conditional("Z", s, a, variant, triple)


@dataclass(frozen=True)
class LemmaSym:
    lemma: int
    t: SquareMatrix
    a: SquareMatrix
    variant: str

    def to_json(self) -> dict:
        return {"kind": f"lemma{self.lemma}", "t": self.t.to_json(), "a": self.a.to_json(), "variant": self.variant}


def apply_symmetry(op, triple: WXZTriple) -> WXZTriple:
    if isinstance(op, ContinuousSym):
        return apply_continuous(op, triple)
    if isinstance(op, DiscreteSym):
        return apply_discrete(op, triple)
    if isinstance(op, LemmaSym):
        fn = apply_lemma1 if op.lemma == 1 else apply_lemma2
        return fn(op.t, op.a, op.variant, triple)
    raise TypeError(f"not a symmetry operation: {op!r}")


def symmetry_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "continuous":
        return ContinuousSym(SquareMatrix.from_json(obj["t"]), SquareMatrix.from_json(obj["s"]),
                             *(Scalar.from_json(obj.get(k, "1")) for k in ("omega", "xi", "zeta")))
    if kind == "discrete":
        params = obj.get("params") or [None, None]
        return DiscreteSym(obj["tag"], *params)
    if kind in ("lemma1", "lemma2"):
        return LemmaSym(int(kind[-1]), SquareMatrix.from_json(obj["t"]), SquareMatrix.from_json(obj["a"]), obj["variant"])
    raise ParseError(f"unknown symmetry kind {kind!r}")


# -- random data -----------------------------------------------------------

_GRID = tuple(Fraction(n, d) for n in range(-3, 4) for d in range(1, 4))


def random_scalar(rng: random.Random, nonzero: bool = True) -> Scalar:
    while True:
        v = rng.choice(_GRID)
        if v or not nonzero:
            return Scalar(v)


def random_gl2(rng: random.Random) -> SquareMatrix:
    """An invertible 2x2 matrix with small-height rational entries."""
    while True:
        m = SquareMatrix([[rng.choice(_GRID) for _ in range(2)] for _ in range(2)])
        if is_invertible(m):
            return m


def random_continuous(rng: random.Random) -> ContinuousSym:
    return ContinuousSym(random_gl2(rng), random_gl2(rng), random_scalar(rng), random_scalar(rng), random_scalar(rng))


def _lemma_candidates(rng: random.Random) -> list:
    b = random_scalar(rng)
    c = random_scalar(rng)
    return [
        SquareMatrix.diag([1, b]),
        SquareMatrix.diag([b, c]),
        SquareMatrix.diag([1, -1]),
        SquareMatrix([[0, 1], [1, 0]]),
        SquareMatrix([[0, b], [1, 0]]),
        SquareMatrix([[1, b], [0, 1]]),
        SquareMatrix([[1, 0], [b, 1]]),
        SquareMatrix.identity(2).scale(b),
    ]


def _solve_a(x: SquareMatrix, t1: SquareMatrix, first: bool):
    """A with ``X t1 = a1 X`` or ``t1 X = X a1`` (``a1`` = Ax1 or 1xA), when X is invertible."""
    if not is_invertible(x):
        return None
    xi = x.inverse()
    for cand in (x @ t1 @ xi, xi @ t1 @ x):
        a = _factor(cand, first)
        if a is not None:
            return a
    return None


def _factor(m: SquareMatrix, first: bool):
    """Return A if ``m == A x 1`` (first) or ``m == 1 x A``."""
    if first:
        a = SquareMatrix([[m[0, 0], m[0, 2]], [m[2, 0], m[2, 2]]])
        return a if kron(a, ONE2) == m else None
    a = SquareMatrix([[m[0, 0], m[0, 1]], [m[1, 0], m[1, 1]]])
    return a if kron(ONE2, a) == m else None


def random_lemma(rng: random.Random, triple: WXZTriple, lemma: int | None = None):
    """A lemma operation whose hypotheses hold for ``triple``, or None."""
    lemma = lemma or rng.choice((1, 2))
    m = triple.w if lemma == 1 else triple.z
    variants = LEMMA_VARIANTS if lemma == 1 else LEMMA2_VARIANTS
    cands = _lemma_candidates(rng)
    rng.shuffle(cands)
    for t in cands:
        if not _commutes(m, kron(t, t)):
            continue
        t1 = kron(t, ONE2) if lemma == 1 else kron(ONE2, t)
        a = _solve_a(triple.x, t1, lemma == 1)
        if a is None:
            continue
        usable = [v for v in variants if not v.startswith("conj") or _commutes(triple.x, t1)]
        return LemmaSym(lemma, t, a, rng.choice(usable))
    return None


def random_symmetry(rng: random.Random, triple: WXZTriple):
    """A random applicable operation: continuous, discrete, or (if available) a lemma."""
    roll = rng.random()
    if roll < 0.35:
        return random_continuous(rng)
    if roll < 0.8:
        ops = all_discrete()
        if not is_invertible(triple.x):
            ops = [o for o in ops if o.tag != "FLIPINV_WZ"]
        if not (is_invertible(triple.w) and is_invertible(triple.z)):
            ops = [o for o in ops if o.a in (None, "id", "+") and o.b in (None, "id", "+")]
        return rng.choice(ops)
    op = random_lemma(rng, triple)
    return op if op is not None else random_continuous(rng)


def orbit_sample(triple: WXZTriple, depth: int, seed: int = 0, with_ops: bool = False) -> list:
    """Bounded random walk: the input followed by ``depth`` successive images."""
    if not triple.residual().passed():
        raise HypothesisViolated("input triple solves the WXZ system")
    rng = random.Random(f"orbit:{seed}")
    out = [triple]
    ops = []
    cur = triple
    while len(out) <= depth:
        op = random_symmetry(rng, cur)
        try:
            nxt = apply_symmetry(op, cur)
        except SingularMatrix:
            continue
        cur = nxt
        out.append(cur)
        ops.append(op)
    return (out, ops) if with_ops else out

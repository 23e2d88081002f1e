"""Normal forms of 4x4 matrices under ``A -> lam (1 x S) A (1 x S)^-1``.

The 2x2 blocks ``A_ij`` (rows ``2i, 2i+1``, columns ``2j, 2j+1``) transform as
``lam S A_ij S^-1``.  The reducer brings the upper-right block to Jordan form,
then spends the remaining freedom on the lower-left, lower-right and upper-left
blocks in that order.  A block is *scalar* (a multiple of 1), *split* (two
distinct eigenvalues) or *Jordan* (one eigenvalue, not scalar).

Exact input is reduced exactly: eigenvalue square roots are adjoined as
quadratic extensions of Q(i), so the round trip holds as an identity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .numfield import BASE, Approx, Field, Surd, adjoin_sqrt
from .scalar import Scalar
from .tensor import SquareMatrix

# zero/equality patterns of the 14 forms; alpha+1 / alpha-1 tie two entries
FORMS = {
    1: ("a1 a2 alpha+1 0", "b1 b2 0 alpha-1", "c1 c2 c3 c4", "d1 d2 d3 d4"),
    2: ("a1 a2 a3 0", "b1 b2 1 a3", "c1 1 c3 c4", "0 d2 d3 d4"),
    3: ("a1 a2 a3 0", "b1 b2 1 a3", "alpha+1 0 c3 c4", "0 alpha-1 d3 d4"),
    4: ("a1 a2 a3 0", "b1 b2 1 a3", "c1 0 c3 c4", "d1 c1 d3 d4"),
    5: ("a1 a2 a3 0", "b1 b2 0 a3", "alpha+1 0 c3 c4", "0 alpha-1 d3 d4"),
    6: ("a1 a2 a3 0", "b1 b2 0 a3", "c1 0 c3 1", "1 c1 0 d4"),
    7: ("a1 a2 a3 0", "b1 b2 0 a3", "c1 0 alpha+1 0", "1 c1 0 alpha-1"),
    8: ("a1 a2 a3 0", "b1 b2 0 a3", "c1 0 c3 0", "1 c1 d3 c3"),
    9: ("a1 a2 a3 0", "b1 b2 0 a3", "c1 0 alpha+1 0", "0 c1 0 alpha-1"),
    10: ("a1 1 a3 0", "0 b2 0 a3", "c1 0 c3 0", "0 c1 1 c3"),
    11: ("alpha+1 0 a3 0", "0 alpha-1 0 a3", "c1 0 c3 0", "0 c1 1 c3"),
    12: ("a1 0 a3 0", "b1 a1 0 a3", "c1 0 c3 0", "0 c1 1 c3"),
    13: ("a1 0 a3 0", "0 b2 0 a3", "c1 0 c3 0", "0 c1 0 c3"),
    14: ("a1 0 a3 0", "1 a1 0 a3", "c1 0 c3 0", "0 c1 0 c3"),
}

# upper-right, lower-left, lower-right, upper-left
BLOCK_ORDER = ((0, 1), (1, 0), (1, 1), (0, 0))


def matches_form(m, index: int) -> bool:
    """Whether a 4x4 matrix (or grid of field elements) fits the pattern of form ``index``."""
    if isinstance(m, SquareMatrix):
        m = [[m[r, c] for c in range(4)] for r in range(4)]
    seen = {}
    for r, row in enumerate(FORMS[index]):
        for c, tok in enumerate(row.split()):
            v = m[r][c]
            if tok in ("0", "1"):
                if not (v - int(tok)).is_zero():
                    return False
                continue
            key, val = tok, v
            if tok.startswith("alpha"):
                key, val = "alpha", v - 1 if tok.endswith("+1") else v + 1
            if key in seen:
                if not (seen[key] - val).is_zero():
                    return False
            else:
                seen[key] = val
    return True


def first_form(m) -> int | None:
    return next((k for k in FORMS if matches_form(m, k)), None)


# -- 2x2 helpers over field elements -------------------------------------------

def _mul2(a, b):
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]


def _inv2(a):
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    di = det.inverse()
    return [[a[1][1] * di, -(a[0][1] * di)], [-(a[1][0] * di), a[0][0] * di]]


def _block(m, bi, bj):
    return [[m[2 * bi + r][2 * bj + c] for c in range(2)] for r in range(2)]


class _Ctx:
    """Arithmetic context: exact quadratic tower or complex floats."""

    def __init__(self, exact: bool):
        self.exact = exact
        self.field: Field = BASE

    def const(self, v):
        return Surd.of(v) if self.exact else Approx(v)

    def sqrt(self, x):
        if not self.exact:
            return Approx(cmath.sqrt(x.z))
        f = x.field if x.field.depth > self.field.depth else self.field
        root, self.field = adjoin_sqrt(x, f)
        return root


@dataclass
class _State:
    ctx: _Ctx
    m: list
    s: list
    lam: object

    def apply(self, s1, lam1):
        """``m -> lam1 (1 x s1) m (1 x s1)^-1`` and accumulate the witness."""
        si = _inv2(s1)
        out = [[None] * 4 for _ in range(4)]
        for bi in range(2):
            for bj in range(2):
                b = _mul2(_mul2(s1, _block(self.m, bi, bj)), si)
                for r in range(2):
                    for c in range(2):
                        out[2 * bi + r][2 * bj + c] = b[r][c] * lam1
        self.m = out
        self.s = _mul2(s1, self.s)
        self.lam = self.lam * lam1


def _split(ctx, b, scale: bool):
    """Diagonalize a block with distinct eigenvalues; with ``scale`` make them alpha+-1."""
    (p, q), (r, t) = b
    one, zero = ctx.const(1), ctx.const(0)
    if q.is_zero() and r.is_zero():
        mu1, mu2 = p, t
        v = [[one, zero], [zero, one]]
    else:
        root = ctx.sqrt((p - t) * (p - t) + q * r * 4)
        half = ctx.const(Scalar(1, 0) / 2)
        mu1, mu2 = (p + t + root) * half, (p + t - root) * half
        if not q.is_zero():
            cols = [(q, mu - p) for mu in (mu1, mu2)]
        else:
            cols = [(mu - t, r) for mu in (mu1, mu2)]
        v = [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
    lam = (mu1 - mu2).inverse() * 2 if scale else one
    return _inv2(v), lam


def _jordan(ctx, b):
    """Basis change putting a non-scalar single-eigenvalue block in the form ((mu,0),(1,mu))."""
    half = ctx.const(Scalar(1, 0) / 2)
    mu = (b[0][0] + b[1][1]) * half
    n = [[b[0][0] - mu, b[0][1]], [b[1][0], b[1][1] - mu]]
    one, zero = ctx.const(1), ctx.const(0)
    v0 = (one, zero) if not (n[0][0].is_zero() and n[1][0].is_zero()) else (zero, one)
    v1 = (n[0][0] * v0[0] + n[0][1] * v0[1], n[1][0] * v0[0] + n[1][1] * v0[1])
    return _inv2([[v0[0], v1[0]], [v0[1], v1[1]]])


def _is_scalar(b) -> bool:
    return b[0][1].is_zero() and b[1][0].is_zero() and (b[0][0] - b[1][1]).is_zero()


def _disc(b):
    return (b[0][0] - b[1][1]) * (b[0][0] - b[1][1]) + b[0][1] * b[1][0] * 4


def _reduce(st: _State) -> int:
    ctx = st.ctx
    one, zero = ctx.const(1), ctx.const(0)
    jordan_at = None
    for idx, (bi, bj) in enumerate(BLOCK_ORDER):
        b = _block(st.m, bi, bj)
        if jordan_at is None:
            if _is_scalar(b):
                continue
            if not _disc(b).is_zero():
                st.apply(*_split(ctx, b, scale=idx < 3))
                return (1, 5, 9, 13)[idx]
            st.apply(_jordan(ctx, b), one)
            if idx == 3:
                return 14
            jordan_at = idx
            continue
        # Remaining freedom: lower-triangular S with lam = S00 / S11.
        base = (2, 6, 10)[jordan_at]
        (p, q), (r, t) = b
        if not q.is_zero():
            root = ctx.sqrt((p - t) * (p - t) + q * r * 4)
            x = (p - t + root) / (q * 2)
            st.apply([[one, zero], [x, one]], one)
            k = ctx.sqrt(_block(st.m, bi, bj)[0][1])
            st.apply([[one, zero], [zero, k]], k.inverse())
            return base
        if not (p - t).is_zero():
            st.apply([[one, zero], [-(r / (p - t)), one]], one)
            k = (p - t) / 2
            st.apply([[one, zero], [zero, k]], k.inverse())
            return base + 1
        return base + 2
    return 13


@dataclass
class CanonicalReduction:
    """``canonical = lam (1 x s) input (1 x s)^-1`` with ``canonical`` in form ``form_index``."""

    form_index: int
    s: SquareMatrix
    lam: Scalar
    canonical: SquareMatrix
    exact: bool
    witness: dict = field(repr=False, default_factory=dict)

    @property
    def tower_depth(self) -> int:
        """Number of square roots adjoined to Q(i) (0 means everything is a Gaussian rational)."""
        return self.witness.get("depth", 0)

    def canonical_elements(self):
        """The canonical matrix as exact tower elements (or floats for inexact input)."""
        return self.witness["canonical"]

    def roundtrip(self) -> bool:
        """Recompute ``lam (1 x S) A (1 x S)^-1`` in the working field and compare entrywise."""
        w = self.witness
        ctx = _Ctx(self.exact)
        st = _State(ctx, w["input"], [[ctx.const(1), ctx.const(0)], [ctx.const(0), ctx.const(1)]], ctx.const(1))
        st.apply(w["s"], w["lam"])
        return all((st.m[r][c] - w["canonical"][r][c]).is_zero() for r in range(4) for c in range(4))

    def to_json(self) -> dict:
        w = self.witness
        out = {
            "form_index": self.form_index,
            "s": self.s.to_json(),
            "lambda": self.lam.to_json(),
            "canonical": self.canonical.to_json(),
            "exact": self.exact,
        }
        if self.exact and self.tower_depth:
            out["symbolic"] = {
                "s": [[str(v) for v in row] for row in w["s"]],
                "lambda": str(w["lam"]),
                "canonical": [[str(v) for v in row] for row in w["canonical"]],
            }
        return out


def _elements(a, ctx):
    if isinstance(a, SquareMatrix):
        if a.dim != 4:
            from .errors import DimensionMismatch

            raise DimensionMismatch("reduce_canonical expects a 4x4 matrix")
        return [[ctx.const(a[r, c]) if ctx.exact else Approx(complex(a[r, c])) for c in range(4)] for r in range(4)]
    return [[ctx.const(v) if not isinstance(v, (Surd, Approx)) else v for v in row] for row in a]


def _is_exact(a) -> bool:
    if isinstance(a, SquareMatrix):
        return a.exact
    return all(isinstance(v, Surd) or (isinstance(v, Scalar) and v.exact) or isinstance(v, int)
               for row in a for v in row)


def reduce_canonical(a) -> CanonicalReduction:
    """Bring a 4x4 matrix to one of the 14 forms.

    ``a`` is a SquareMatrix or a 4x4 grid of tower elements (e.g. a previous
    ``canonical_elements()``).  The form is the first of 1..14 whose pattern the
    result matches.
    """
    ctx = _Ctx(_is_exact(a))
    if ctx.exact:
        # start the tower where the input already lives
        for row in a if not isinstance(a, SquareMatrix) else ():
            for v in row:
                if isinstance(v, Surd) and v.field.depth > ctx.field.depth:
                    ctx.field = v.field
    m = _elements(a, ctx)
    one, zero = ctx.const(1), ctx.const(0)
    st = _State(ctx, m, [[one, zero], [zero, one]], one)
    tree_form = _reduce(st)
    form = first_form(st.m)
    if form is None:  # pragma: no cover - the tree always lands in a pattern
        raise AssertionError(f"reduction left the pattern of form {tree_form}")

    def conv(v):
        return v.to_scalar()

    s = SquareMatrix([[conv(v) for v in row] for row in st.s])
    canonical = SquareMatrix([[conv(v) for v in row] for row in st.m])
    witness = {"input": m, "s": st.s, "lam": st.lam, "canonical": st.m, "depth": ctx.field.depth, "tree_form": tree_form}
    return CanonicalReduction(form, s, conv(st.lam), canonical, ctx.exact, witness)

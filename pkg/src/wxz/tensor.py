"""Small dense matrices over :class:`~wxz.scalar.Scalar` and the tensor calculus
of the Yang-Baxter commutator.

Index convention: for a 4x4 matrix the row index is ``2*i1 + i2`` over local
indices ``i1, i2 in {0, 1}`` (first tensor factor most significant); 8x8
matrices use ``4*i1 + 2*i2 + i3``.

Exact matrices are stored as Gaussian-integer numerator arrays over one
positive common denominator (always reduced), approximate matrices as a
complex128 array.  Products of exact matrices therefore run on Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import DimensionMismatch, ParseError, SingularMatrix
from .scalar import TAU, Scalar

ALLOWED_DIMS = (2, 4, 8)


def _obj(values, n):
    arr = np.empty((n, n), dtype=object)
    arr[:, :] = values
    return arr


def _zeros(n):
    return _obj([[0] * n for _ in range(n)], n)


def _is_all_zero(arr) -> bool:
    return not any(arr.flat)


class SquareMatrix:
    """Immutable ``dim x dim`` matrix, ``dim`` in {2, 4, 8}."""

    __slots__ = ("dim", "_re", "_im", "_den", "_c", "_hash")

    def __init__(self, rows):
        """Build from a nested sequence of anything :meth:`Scalar.of` accepts."""
        rows = [list(r) for r in rows]
        n = len(rows)
        if n not in ALLOWED_DIMS or any(len(r) != n for r in rows):
            raise DimensionMismatch(f"expected a square matrix of size 2, 4 or 8, got {n}x{[len(r) for r in rows]}")
        entries = [Scalar.of(x) for r in rows for x in r]
        if all(e.exact for e in entries):
            den = 1
            for e in entries:
                den = math.lcm(den, e.re.denominator, e.im.denominator)
            re = _obj([[int(entries[i * n + j].re * den) for j in range(n)] for i in range(n)], n)
            im = _obj([[int(entries[i * n + j].im * den) for j in range(n)] for i in range(n)], n)
            self._set_exact(n, re, im, den)
        else:
            c = np.array([complex(e) for e in entries], dtype=complex).reshape(n, n)
            self._set_approx(n, c)

    # -- low level constructors --------------------------------------

    def _set_exact(self, n, re, im, den):
        g = math.gcd(den, *re.flat, *(im.flat if im is not None else ()))
        if g > 1:
            re = re // g
            if im is not None:
                im = im // g
            den //= g
        if im is not None and _is_all_zero(im):
            im = None
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "_re", re)
        object.__setattr__(self, "_im", im)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_c", None)
        object.__setattr__(self, "_hash", None)

    def _set_approx(self, n, c):
        c = np.array(c, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "_re", None)
        object.__setattr__(self, "_im", None)
        object.__setattr__(self, "_den", None)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _exact(cls, re, im, den) -> "SquareMatrix":
        n = re.shape[0]
        if n not in ALLOWED_DIMS:
            raise DimensionMismatch(f"unsupported dimension {n}")
        m = object.__new__(cls)
        m._set_exact(n, re, im, den)
        return m

    @classmethod
    def _approx(cls, c) -> "SquareMatrix":
        n = c.shape[0]
        if n not in ALLOWED_DIMS:
            raise DimensionMismatch(f"unsupported dimension {n}")
        m = object.__new__(cls)
        m._set_approx(n, c)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("SquareMatrix is immutable")

    @classmethod
    def from_complex(cls, arr) -> "SquareMatrix":
        return cls._approx(np.asarray(arr, dtype=complex))

    @classmethod
    def identity(cls, n: int) -> "SquareMatrix":
        return cls._exact(_obj([[int(i == j) for j in range(n)] for i in range(n)], n), None, 1)

    @classmethod
    def zero(cls, n: int) -> "SquareMatrix":
        return cls._exact(_zeros(n), None, 1)

    @classmethod
    def diag(cls, values) -> "SquareMatrix":
        values = list(values)
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "SquareMatrix":
        return cls([[int(r == i and c == j) for c in range(n)] for r in range(n)])

    # -- inspection ---------------------------------------------------

    @property
    def exact(self) -> bool:
        return self._c is None

    def __getitem__(self, idx) -> Scalar:
        i, j = idx
        if self.exact:
            im = 0 if self._im is None else self._im[i, j]
            return Scalar(Fraction(self._re[i, j], self._den), Fraction(im, self._den))
        return Scalar.approx(self._c[i, j])

    def rows(self):
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def entries(self):
        return tuple(self[i, j] for i in range(self.dim) for j in range(self.dim))

    def to_complex(self) -> np.ndarray:
        if self.exact:
            re = np.array([[float(Fraction(x, self._den)) for x in row] for row in self._re], dtype=float)
            if self._im is None:
                return re.astype(complex)
            im = np.array([[float(Fraction(x, self._den)) for x in row] for row in self._im], dtype=float)
            return re + 1j * im
        return np.array(self._c)

    def _int_form(self):
        return self._re, self._im, self._den

    def max_abs(self) -> float:
        """Largest entry modulus (the residual norm used throughout)."""
        if self.exact:
            if self._im is None:
                m2 = max((x * x for x in self._re.flat), default=0)
            else:
                m2 = max(x * x + y * y for x, y in zip(self._re.flat, self._im.flat))
            return math.sqrt(float(Fraction(m2, self._den * self._den)))
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def is_zero(self, tau: float | None = None) -> bool:
        if self.exact:
            return _is_all_zero(self._re) and self._im is None
        return self.max_abs() < (TAU if tau is None else tau)

    def is_identity(self) -> bool:
        return self == SquareMatrix.identity(self.dim)

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.exact and other.exact:
            if self._den != other._den or not np.array_equal(self._re, other._re):
                return False
            if (self._im is None) != (other._im is None):
                return False
            return self._im is None or np.array_equal(self._im, other._im)
        return float(np.max(np.abs(self.to_complex() - other.to_complex()))) < TAU

    def close(self, other, tau: float | None = None) -> bool:
        if self.exact and other.exact:
            return self == other
        return float(np.max(np.abs(self.to_complex() - other.to_complex()))) < (TAU if tau is None else tau)

    def __hash__(self):
        if self._hash is None:
            if self.exact:
                h = hash((self.dim, self._den, tuple(self._re.flat),
                          None if self._im is None else tuple(self._im.flat)))
            else:
                h = hash(("approx", self.dim))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows())
        tag = "" if self.exact else ", approx"
        return f"SquareMatrix([{body}]{tag})"

    # -- arithmetic ---------------------------------------------------

    def _check_same_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        self._check_same_dim(other)
        if self.exact and other.exact:
            da, db = self._den, other._den
            re = self._re * db + other._re * da
            im = _add_opt(_scale_opt(self._im, db), _scale_opt(other._im, da))
            return SquareMatrix._exact(re, im, da * db)
        return SquareMatrix._approx(self.to_complex() + other.to_complex())

    def __neg__(self):
        if self.exact:
            return SquareMatrix._exact(-self._re, None if self._im is None else -self._im, self._den)
        return SquareMatrix._approx(-self._c)

    def __sub__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "SquareMatrix":
        s = Scalar.of(s)
        if self.exact and s.exact:
            # (p + qi) / d  with  s = (u + vi) / w
            w = math.lcm(s.re.denominator, s.im.denominator)
            u, v = int(s.re * w), int(s.im * w)
            re, im = _cmatmul_scalar(self._re, self._im, u, v)
            return SquareMatrix._exact(re, im, self._den * w)
        return SquareMatrix._approx(self.to_complex() * complex(s))

    def __mul__(self, other):
        if isinstance(other, SquareMatrix):
            return self @ other
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        self._check_same_dim(other)
        if self.exact and other.exact:
            re, im = _cmatmul(self._re, self._im, other._re, other._im)
            return SquareMatrix._exact(re, im, self._den * other._den)
        return SquareMatrix._approx(self.to_complex() @ other.to_complex())

    def transpose(self) -> "SquareMatrix":
        if self.exact:
            return SquareMatrix._exact(self._re.T.copy(), None if self._im is None else self._im.T.copy(), self._den)
        return SquareMatrix._approx(self._c.T.copy())

    @property
    def T(self):
        return self.transpose()

    def permute(self, perm) -> "SquareMatrix":
        """Return ``Q M Q^{-1}`` for the permutation matrix sending basis index ``perm[k]`` to ``k``."""
        perm = list(perm)
        if self.exact:
            return SquareMatrix._exact(self._re[np.ix_(perm, perm)], None if self._im is None else self._im[np.ix_(perm, perm)], self._den)
        return SquareMatrix._approx(self._c[np.ix_(perm, perm)])

    def determinant(self) -> Scalar:
        if self.exact:
            rows = _gauss_rows(self)
            ech, piv, sign = linalg.fraction_free_echelon(rows)
            if len(piv) < self.dim:
                return Scalar(0)
            d = ech[self.dim - 1][self.dim - 1]
            scale = self._den ** self.dim
            return Scalar(Fraction(sign * d[0], scale), Fraction(sign * d[1], scale))
        return Scalar.approx(np.linalg.det(self._c))

    def inverse(self) -> "SquareMatrix":
        return matrix_inverse(self)

    def plus(self) -> "SquareMatrix":
        """``P Y P`` with ``P`` the flip of the two tensor factors (4x4 only)."""
        _need_dim(self, 4)
        return self.permute(_FLIP_PERM)

    def at(self) -> "SquareMatrix":
        """Antidiagonal transposition ``(sigma x sigma) Y^T (sigma x sigma)``."""
        _need_dim(self, 4)
        return self.transpose().permute(_SIGMA2_PERM)

    def partial_transpose(self) -> "SquareMatrix":
        """Transpose in the second tensor factor: swap ``i2`` with ``j2``."""
        _need_dim(self, 4)
        rows = self.rows()
        out = [[None] * 4 for _ in range(4)]
        for i1 in range(2):
            for i2 in range(2):
                for j1 in range(2):
                    for j2 in range(2):
                        out[2 * i1 + j2][2 * j1 + i2] = rows[2 * i1 + i2][2 * j1 + j2]
        return SquareMatrix(out)

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.dim, "rows": [[x.to_json() for x in row] for row in self.rows()]}

    @classmethod
    def from_json(cls, obj) -> "SquareMatrix":
        if isinstance(obj, list):
            rows = obj
        elif isinstance(obj, dict) and "rows" in obj:
            rows = obj["rows"]
        else:
            raise ParseError("matrix JSON needs a 'rows' array", "top level")
        if not isinstance(rows, list) or not rows:
            raise ParseError("'rows' must be a non-empty array", "rows")
        parsed = []
        for i, row in enumerate(rows):
            if not isinstance(row, list):
                raise ParseError("row is not an array", f"rows[{i}]")
            out = []
            for j, x in enumerate(row):
                try:
                    out.append(Scalar.from_json(x))
                except (ParseError, TypeError, ValueError) as exc:
                    raise ParseError(str(exc), f"rows[{i}][{j}]") from exc
            parsed.append(out)
        m = cls(parsed)
        if isinstance(obj, dict) and "dim" in obj and obj["dim"] != m.dim:
            raise DimensionMismatch(f"declared dim {obj['dim']} but rows give {m.dim}")
        return m


# -- integer kernels ------------------------------------------------------

def _scale_opt(a, k):
    return None if a is None else a * k


def _add_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _cmatmul(ar, ai, br, bi):
    re = ar @ br
    if ai is not None and bi is not None:
        re = re - ai @ bi
    im = None
    if bi is not None:
        im = ar @ bi
    if ai is not None:
        im = ai @ br if im is None else im + ai @ br
    return re, im


def _cmatmul_scalar(ar, ai, u, v):
    re = ar * u
    if ai is not None:
        re = re - ai * v
    im = ar * v
    if ai is not None:
        im = im + ai * u
    return re, im


def _gauss_rows(m: SquareMatrix):
    re, im, _ = m._int_form()
    n = m.dim
    if im is None:
        return [[(int(re[i, j]), 0) for j in range(n)] for i in range(n)]
    return [[(int(re[i, j]), int(im[i, j])) for j in range(n)] for i in range(n)]


def _need_dim(m: SquareMatrix, n: int):
    if m.dim != n:
        raise DimensionMismatch(f"expected a {n}x{n} matrix, got {m.dim}x{m.dim}")


def _kron_arr(a, b):
    n, k = a.shape[0], b.shape[0]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(n * k, n * k)


# -- public operations -----------------------------------------------------

def identity(n: int) -> SquareMatrix:
    return SquareMatrix.identity(n)


def kron(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    """Kronecker product; ``(a x b)[2*i1+i2, 2*j1+j2] = a[i1,j1] * b[i2,j2]`` for 2x2 factors."""
    if a.dim * b.dim not in ALLOWED_DIMS:
        raise DimensionMismatch(f"kron of {a.dim}x{a.dim} and {b.dim}x{b.dim} leaves the supported sizes")
    if a.exact and b.exact:
        ar, ai, ad = a._int_form()
        br, bi, bd = b._int_form()
        re = _kron_arr(ar, br)
        if ai is not None and bi is not None:
            re = re - _kron_arr(ai, bi)
        im = None
        if bi is not None:
            im = _kron_arr(ar, bi)
        if ai is not None:
            im = _kron_arr(ai, br) if im is None else im + _kron_arr(ai, br)
        return SquareMatrix._exact(re, im, ad * bd)
    return SquareMatrix._approx(np.kron(a.to_complex(), b.to_complex()))


def matrix_mul(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    return a @ b


def matrix_transpose(a: SquareMatrix) -> SquareMatrix:
    return a.transpose()


def matrix_inverse(a: SquareMatrix) -> SquareMatrix:
    """Exact inverse by fraction-free Gauss-Jordan; ``numpy.linalg`` for approximate input."""
    if a.exact:
        rows = _gauss_rows(a)
        d, right = linalg.fraction_free_gauss_jordan(rows)
        if d is None:
            raise SingularMatrix("matrix is singular")
        # a = M / den, M^{-1} = right / d, a^{-1} = den * right / d
        n = a.dim
        re = _obj([[right[i][j][0] for j in range(n)] for i in range(n)], n)
        im = _obj([[right[i][j][1] for j in range(n)] for i in range(n)], n)
        # divide by d = (u + vi): multiply by conj(d) / |d|^2
        u, v = d
        nre, nim = _cmatmul_scalar(re, im, u, -v)
        den_scale = a._den
        norm = u * u + v * v
        return SquareMatrix._exact(nre * den_scale, nim * den_scale, norm)
    c = a.to_complex()
    if abs(np.linalg.det(c)) < TAU:
        raise SingularMatrix("matrix is numerically singular")
    return SquareMatrix._approx(np.linalg.inv(c))


def is_invertible(a: SquareMatrix) -> bool:
    if a.exact:
        return linalg.rank(_gauss_rows(a)) == a.dim
    return abs(np.linalg.det(a.to_complex())) >= TAU


# fixed permutations on the 4- and 8-dimensional index sets
_FLIP_PERM = [0, 2, 1, 3]
_SIGMA2_PERM = [3, 2, 1, 0]
_SWAP23_PERM = [4 * i1 + 2 * i3 + i2 for i1 in range(2) for i2 in range(2) for i3 in range(2)]

P = SquareMatrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
SIGMA = SquareMatrix([[0, 1], [1, 0]])
ONE2 = SquareMatrix.identity(2)
ONE4 = SquareMatrix.identity(4)
ONE8 = SquareMatrix.identity(8)


def embed(r: SquareMatrix, slot) -> SquareMatrix:
    """Place a 4x4 matrix on tensor factors 12, 13 or 23 of the triple product."""
    _need_dim(r, 4)
    slot = str(slot)
    if slot == "12":
        return kron(r, ONE2)
    if slot == "23":
        return kron(ONE2, r)
    if slot == "13":
        return kron(r, ONE2).permute(_SWAP23_PERM)
    raise ValueError(f"slot must be 12, 13 or 23, not {slot!r}")


def _embed_int(re, im, slot):
    eye = _obj([[1, 0], [0, 1]], 2)
    if slot == "23":
        f = lambda a: None if a is None else _kron_arr(eye, a)
    else:
        f = lambda a: None if a is None else _kron_arr(a, eye)
    out_re, out_im = f(re), f(im)
    if slot == "13":
        ix = np.ix_(_SWAP23_PERM, _SWAP23_PERM)
        out_re = out_re[ix]
        out_im = None if out_im is None else out_im[ix]
    return out_re, out_im


def _embed_complex(c, slot):
    eye = np.eye(2)
    if slot == "23":
        return np.kron(eye, c)
    out = np.kron(c, eye)
    if slot == "13":
        out = out[np.ix_(_SWAP23_PERM, _SWAP23_PERM)]
    return out


def _commutator_parts(r, s, t):
    """Numerators and denominator (exact) or a complex array of [R,S,T]."""
    for m in (r, s, t):
        _need_dim(m, 4)
    if r.exact and s.exact and t.exact:
        rr, ri, rd = r._int_form()
        sr, si, sd = s._int_form()
        tr, ti, td = t._int_form()
        r12 = _embed_int(rr, ri, "12")
        s13 = _embed_int(sr, si, "13")
        t23 = _embed_int(tr, ti, "23")
        left = _cmatmul(*_cmatmul(*r12, *s13), *t23)
        right = _cmatmul(*_cmatmul(*t23, *s13), *r12)
        re = left[0] - right[0]
        im = _add_opt(left[1], None if right[1] is None else -right[1])
        return re, im, rd * sd * td
    r12 = _embed_complex(r.to_complex(), "12")
    s13 = _embed_complex(s.to_complex(), "13")
    t23 = _embed_complex(t.to_complex(), "23")
    return r12 @ s13 @ t23 - t23 @ s13 @ r12


def yb_commutator(r: SquareMatrix, s: SquareMatrix, t: SquareMatrix) -> SquareMatrix:
    """``[R,S,T] = R12 S13 T23 - T23 S13 R12`` as an 8x8 matrix."""
    parts = _commutator_parts(r, s, t)
    if isinstance(parts, tuple):
        return SquareMatrix._exact(*parts)
    return SquareMatrix._approx(parts)


def commutator_residual(r: SquareMatrix, s: SquareMatrix, t: SquareMatrix) -> tuple[float, bool]:
    """``(max |entry| of [R,S,T], exactly_zero)`` without building Scalars."""
    parts = _commutator_parts(r, s, t)
    if isinstance(parts, tuple):
        re, im, den = parts
        if im is None:
            m2 = max(x * x for x in re.flat)
        else:
            m2 = max(x * x + y * y for x, y in zip(re.flat, im.flat))
        if m2 == 0:
            return 0.0, True
        return math.sqrt(float(Fraction(m2, den * den))), False
    return float(np.max(np.abs(parts))), False


EQUATIONS = ("WWW", "ZZZ", "WXX", "XXZ")


@dataclass(frozen=True)
class ResidualReport:
    """Max-abs residuals of the four WXZ equations."""

    www: float
    zzz: float
    wxx: float
    xxz: float
    exact: bool
    exact_zero: tuple = (False, False, False, False)
    inputs_exact: bool = True

    @property
    def residuals(self) -> dict:
        return {"WWW": self.www, "ZZZ": self.zzz, "WXX": self.wxx, "XXZ": self.xxz}

    @property
    def max_residual(self) -> float:
        return max(self.www, self.zzz, self.wxx, self.xxz)

    def passed(self, tau: float = TAU) -> bool:
        """Exact inputs need exact zeros; approximate ones need residuals below ``tau``."""
        if self.inputs_exact:
            return all(self.exact_zero)
        return all(z or v < tau for z, v in zip(self.exact_zero, (self.www, self.zzz, self.wxx, self.xxz)))

    def to_json(self) -> dict:
        out = {}
        for name, val, zero in zip(EQUATIONS, (self.www, self.zzz, self.wxx, self.xxz), self.exact_zero):
            out[name] = "0" if zero else repr(val)
        return {"residuals": out, "exact": self.exact, "max": 0.0 if self.exact and all(self.exact_zero) else self.max_residual}


def wxz_residual(w: SquareMatrix, x: SquareMatrix, z: SquareMatrix) -> ResidualReport:
    """Evaluate ``[W,W,W]``, ``[Z,Z,Z]``, ``[W,X,X]`` and ``[X,X,Z]``."""
    vals = [
        commutator_residual(w, w, w),
        commutator_residual(z, z, z),
        commutator_residual(w, x, x),
        commutator_residual(x, x, z),
    ]
    zeros = tuple(v[1] for v in vals)
    all_exact = w.exact and x.exact and z.exact
    return ResidualReport(
        www=vals[0][0], zzz=vals[1][0], wxx=vals[2][0], xxz=vals[3][0],
        exact=all_exact and all(zeros), exact_zero=zeros, inputs_exact=all_exact,
    )


def second_inverse_check(r: SquareMatrix) -> bool:
    """True iff the partial transpose in the second tensor factor is invertible."""
    _need_dim(r, 4)
    return is_invertible(r.partial_transpose())


@dataclass(frozen=True)
class WXZTriple:
    """An ordered triple of 4x4 matrices, candidates for the WXZ system."""

    w: SquareMatrix
    x: SquareMatrix
    z: SquareMatrix

    def __post_init__(self):
        for m in (self.w, self.x, self.z):
            _need_dim(m, 4)

    def residual(self) -> ResidualReport:
        return wxz_residual(self.w, self.x, self.z)

    @property
    def exact(self) -> bool:
        return self.w.exact and self.x.exact and self.z.exact

    def replace(self, **kw) -> "WXZTriple":
        return WXZTriple(kw.get("w", self.w), kw.get("x", self.x), kw.get("z", self.z))

    def to_json(self) -> dict:
        return {"W": self.w.to_json(), "X": self.x.to_json(), "Z": self.z.to_json()}

    @classmethod
    def from_json(cls, obj) -> "WXZTriple":
        return cls(*(SquareMatrix.from_json(obj[k]) for k in ("W", "X", "Z")))

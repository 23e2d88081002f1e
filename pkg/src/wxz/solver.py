"""Linear solves for one unknown of the WXZ system, YBE filtering, the (Q, R)
derivation rule and the full triple check.

``[X,X,Z] = 0`` is linear in Z and ``[W,X,X] = 0`` is linear in W.  Both are
written as a homogeneous 64x16 system: row ``8*r + c`` is entry ``(r, c)`` of
the 8x8 commutator, column ``4*i + j`` is entry ``(i, j)`` of the unknown.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import linalg
from .canonical import CanonicalReduction, reduce_canonical
from .errors import ConstraintViolated, ParseError, PreconditionViolated, SingularMatrix
from .scalar import TAU, Scalar
from .tensor import (ResidualReport, SquareMatrix, WXZTriple, commutator_residual, is_invertible,
                     second_inverse_check, wxz_residual, yb_commutator)

UNKNOWNS = ("Z", "W")


def _unit(i: int, j: int) -> SquareMatrix:
    return SquareMatrix([[int(r == i and c == j) for c in range(4)] for r in range(4)])


def _gaussian_int_row(row) -> list:
    """Scale a row of exact Scalars to Gaussian integers (same nullspace)."""
    den = 1
    for v in row:
        den = lcm(den, v.re.denominator, v.im.denominator)
    return [(int(v.re * den), int(v.im * den)) for v in row]


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous system whose solutions are the admissible Z (or W) for a fixed X."""

    unknown: str
    x: SquareMatrix
    coefficients: tuple  # 64 rows of 16 Scalars

    @classmethod
    def build(cls, x: SquareMatrix, unknown: str = "Z") -> "LinearSystem":
        if unknown not in UNKNOWNS:
            raise ParseError(f"unknown must be one of {UNKNOWNS}")
        cols = []
        for i in range(4):
            for j in range(4):
                e = _unit(i, j)
                comm = yb_commutator(x, x, e) if unknown == "Z" else yb_commutator(e, x, x)
                cols.append(comm.entries())
        rows = tuple(tuple(cols[k][r] for k in range(16)) for r in range(64))
        return cls(unknown, x, rows)

    @property
    def exact(self) -> bool:
        return self.x.exact

    @property
    def shape(self) -> tuple:
        return len(self.coefficients), len(self.coefficients[0])

    def _int_rows(self):
        return [_gaussian_int_row(r) for r in self.coefficients if any(not v.is_zero() for v in r)]

    def _array(self) -> np.ndarray:
        return np.array([[complex(v) for v in r] for r in self.coefficients], dtype=complex)

    def rank(self, tau: float = TAU) -> int:
        if self.exact:
            return linalg.rank(self._int_rows())
        return int(np.linalg.matrix_rank(self._array(), tol=tau))

    def nullspace(self, tau: float = TAU) -> list:
        """Basis of the solution space, reshaped to 4x4 matrices."""
        if self.exact:
            vecs = linalg.nullspace(self._int_rows(), 16)
            return [SquareMatrix([[Scalar(*v[4 * i + j]) for j in range(4)] for i in range(4)]) for v in vecs]
        _, s, vh = np.linalg.svd(self._array())
        r = int(np.sum(s > tau))
        return [SquareMatrix.from_complex(v.conj().reshape(4, 4)) for v in vh[r:]]

    def apply(self, m: SquareMatrix) -> list:
        """Coefficient matrix times the flattened unknown (the 64 residual entries)."""
        vec = m.entries()
        return [sum((c * v for c, v in zip(row, vec)), Scalar(0)) for row in self.coefficients]


def solve_z_linear(x: SquareMatrix) -> list:
    """Basis of ``{Z : X12 X13 Z23 = Z23 X13 X12}``."""
    return LinearSystem.build(x, "Z").nullspace()


def solve_w_linear(x: SquareMatrix) -> list:
    """Basis of ``{W : W12 X13 X23 = X23 X13 W12}``."""
    return LinearSystem.build(x, "W").nullspace()


def in_span(m: SquareMatrix, basis: list, tau: float = TAU) -> bool:
    """Whether ``m`` is a linear combination of ``basis`` (exact rank test when possible)."""
    if not basis:
        return m.is_zero()
    if m.exact and all(b.exact for b in basis):
        cols = [b.entries() for b in basis]
        rows = [[cols[k][r] for k in range(len(cols))] for r in range(16)]
        with_m = [row + [m.entries()[r]] for r, row in enumerate(rows)]
        return linalg.rank([_gaussian_int_row(r) for r in with_m]) == linalg.rank([_gaussian_int_row(r) for r in rows])
    a = np.array([b.to_complex().reshape(16) for b in basis]).T
    y = m.to_complex().reshape(16)
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    return float(np.max(np.abs(a @ coef - y))) < tau * max(1.0, float(np.max(np.abs(y))))


def is_ybe_solution(m: SquareMatrix, tau: float = TAU) -> bool:
    value, zero = commutator_residual(m, m, m)
    return zero if m.exact else (zero or value < tau)


def ybe_filter(candidates, require_invertible: bool = False, tau: float = TAU) -> list:
    """Keep candidates with ``[R,R,R] = 0`` (and, if asked, invertible ones)."""
    return [m for m in candidates if is_ybe_solution(m, tau) and (not require_invertible or is_invertible(m))]


# Linear ansatz patterns: positions allowed to be nonzero.
PATTERNS = {
    "diagonal": {(0, 0), (1, 1), (2, 2), (3, 3)},
    "five-vertex": {(0, 0), (1, 1), (2, 2), (3, 3), (2, 1)},
    "six-vertex": {(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)},
    "eight-vertex": {(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1), (0, 3), (3, 0)},
    "lower-triangular": {(r, c) for r in range(4) for c in range(4) if r >= c},
}


def _restrict(basis: list, pattern: set) -> list:
    """Basis of ``span(basis)`` intersected with matrices supported on ``pattern``."""
    if not basis or not all(b.exact for b in basis):
        return []
    k = len(basis)
    outside = [(r, c) for r in range(4) for c in range(4) if (r, c) not in pattern]
    rows = [[basis[j][r, c] for j in range(k)] for r, c in outside]
    rows = [_gaussian_int_row(r) for r in rows if any(not v.is_zero() for v in r)]
    coeffs = linalg.nullspace(rows, k) if rows else [[(Fraction(int(i == j)), Fraction(0)) for i in range(k)] for j in range(k)]
    out = []
    for vec in coeffs:
        m = SquareMatrix.zero(4)
        for j, (re, im) in enumerate(vec):
            if re or im:
                m = m + basis[j].scale(Scalar(re, im))
        out.append(m)
    return out


def ybe_search(x: SquareMatrix, unknown: str = "Z", samples: int = 40, seed: int = 0,
               require_invertible: bool = True) -> dict:
    """Look for YBE solutions in the linear solution space of one unknown.

    Tries the basis vectors, random small integer combinations, and the same on
    each pattern sub-space.  Reports what was found; it is not exhaustive.
    """
    basis = LinearSystem.build(x, unknown).nullspace()
    rng = random.Random(f"search:{seed}")
    spaces = {"span": basis}
    for name, pat in PATTERNS.items():
        spaces[name] = _restrict(basis, pat)
    found = {}
    for name, sp in spaces.items():
        cands = list(sp)
        for _ in range(samples if sp else 0):
            m = SquareMatrix.zero(4)
            for b in sp:
                m = m + b.scale(rng.randint(-3, 3))
            cands.append(m)
        unique = []
        for m in ybe_filter(cands, require_invertible=require_invertible):
            if not any(m == u for u in unique):
                unique.append(m)
        found[name] = unique
    return {"dimension": len(basis), "basis": basis, "solutions": found}


def derive_from_qr(q: SquareMatrix, r: SquareMatrix, tau: float = TAU, check: bool = True) -> tuple:
    """``(Q, R, Q)`` and ``(Q, R, R^+ Q R^-)`` from a pair solving the QRR system.

    The first image always solves the WXZ system when the preconditions hold.
    The second one does not in general (``Q = R`` generic is a counterexample),
    so with ``check`` it is verified and ConstraintViolated is raised on failure.
    """
    for name, (a, b, c) in (("[Q,Q,Q]", (q, q, q)), ("[R,R,R]", (r, r, r)),
                            ("[Q,R,R]", (q, r, r)), ("[R,R,Q]", (r, r, q))):
        value, zero = commutator_residual(a, b, c)
        exact = a.exact and b.exact and c.exact
        if not (zero or (not exact and value < tau)):
            raise PreconditionViolated(f"{name} = 0", f"residual {value:.3g}")
    if not is_invertible(r):
        raise SingularMatrix("R is singular")
    first = WXZTriple(q, r, q)
    second = WXZTriple(q, r, r.plus() @ q @ r.inverse())
    if check:
        rep = second.residual()
        if not rep.passed(tau):
            bad = [k for k, z in zip(("WWW", "ZZZ", "WXX", "XXZ"), rep.exact_zero) if not z]
            raise ConstraintViolated("(Q, R, R^+ Q R^-) solves the WXZ system", f"nonzero {', '.join(bad)}")
    return first, second


@dataclass(frozen=True)
class TripleCheck:
    report: ResidualReport
    invertible: dict
    second_invertible: dict
    require_second_inverse: bool = False

    def passed(self, tau: float = TAU) -> bool:
        ok = self.report.passed(tau) and all(self.invertible.values())
        if self.require_second_inverse:
            ok = ok and self.second_invertible["W"] and self.second_invertible["Z"]
        return ok

    def to_json(self, tau: float = TAU) -> dict:
        rep = self.report.to_json()
        return {
            "residuals": rep["residuals"],
            "exact": rep["exact"],
            "max_residual": rep["max"],
            "invertible": dict(self.invertible),
            "second_invertible": dict(self.second_invertible),
            "require_second_inverse": self.require_second_inverse,
            "passed": self.passed(tau),
        }


def check_triple(w: SquareMatrix, x: SquareMatrix, z: SquareMatrix, require_second_inverse: bool = False) -> TripleCheck:
    """Residuals, invertibility of W, X, Z and second invertibility of W and Z."""
    report = wxz_residual(w, x, z)
    inv = {k: is_invertible(m) for k, m in (("W", w), ("X", x), ("Z", z))}
    second = {k: second_inverse_check(m) for k, m in (("W", w), ("Z", z))}
    return TripleCheck(report, inv, second, require_second_inverse)


__all__ = [
    "CanonicalReduction", "LinearSystem", "TripleCheck", "check_triple", "derive_from_qr", "in_span",
    "is_ybe_solution", "reduce_canonical", "solve_w_linear", "solve_z_linear", "ybe_filter", "ybe_search",
]

"""Fraction-free elimination over the Gaussian integers.

Gaussian integers are ``(re, im)`` tuples of Python ints.  Everything here
is exact; callers clear denominators before entering and restore them after.
"""

from __future__ import annotations

from fractions import Fraction

GZERO = (0, 0)
GONE = (1, 0)


def gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def gdiv_exact(a, b):
    """Divide Gaussian integers, asserting the quotient is integral."""
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    qr, rr = divmod(re, n)
    qi, ri = divmod(im, n)
    if rr or ri:
        raise ArithmeticError("inexact Gaussian-integer division in fraction-free elimination")
    return (qr, qi)


def is_gzero(a) -> bool:
    return a[0] == 0 and a[1] == 0


def fraction_free_gauss_jordan(rows):
    """Reduce ``[M | I]`` fraction-free.

    Returns ``(d, right)`` with ``right = d * M^{-1}``, or ``(None, None)``
    when ``M`` is singular.  Pivot choice: first nonzero entry in the column.
    """
    n = len(rows)
    aug = [list(r) + [GONE if j == i else GZERO for j in range(n)] for i, r in enumerate(rows)]
    width = 2 * n
    prev = GONE
    for k in range(n):
        piv = next((r for r in range(k, n) if not is_gzero(aug[r][k])), None)
        if piv is None:
            return None, None
        if piv != k:
            aug[k], aug[piv] = aug[piv], aug[k]
        akk = aug[k][k]
        rowk = aug[k]
        for i in range(n):
            if i == k:
                continue
            rowi = aug[i]
            aik = rowi[k]
            for j in range(width):
                if j == k:
                    continue
                rowi[j] = gdiv_exact(gsub(gmul(akk, rowi[j]), gmul(aik, rowk[j])), prev)
            rowi[k] = GZERO
        prev = akk
    d = aug[0][0]
    return d, [row[n:] for row in aug]


def fraction_free_echelon(rows):
    """Bareiss row echelon form.

    Returns ``(echelon_rows, pivot_columns, sign)``; only the first
    ``len(pivot_columns)`` rows are nonzero and ``sign`` is the parity of the
    row swaps.  For a full-rank square input the last pivot is ``sign * det``.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    prev = GONE
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if not is_gzero(m[i][c])), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        p = m[r][c]
        rowr = m[r]
        for i in range(r + 1, nrows):
            rowi = m[i]
            aic = rowi[c]
            for j in range(c + 1, ncols):
                rowi[j] = gdiv_exact(gsub(gmul(p, rowi[j]), gmul(aic, rowr[j])), prev)
            rowi[c] = GZERO
        # entries left of the pivot in later rows are already zero
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots, sign


def rank(rows) -> int:
    if not rows:
        return 0
    return len(fraction_free_echelon(rows)[1])


def nullspace(rows, ncols: int):
    """Exact basis of ``{v : rows @ v = 0}`` as lists of complex Fractions.

    Each basis vector is a list of ``(Fraction, Fraction)`` pairs, with a 1
    at its free column.
    """
    if not rows:
        return [[(Fraction(int(j == f)), Fraction(0)) for j in range(ncols)] for f in range(ncols)]
    ech, pivots, _ = fraction_free_echelon(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [(Fraction(0), Fraction(0))] * ncols
        vec[f] = (Fraction(1), Fraction(0))
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = ech[k]
            acc_re, acc_im = Fraction(0), Fraction(0)
            for j in range(c + 1, ncols):
                a = row[j]
                if is_gzero(a):
                    continue
                vr, vi = vec[j]
                if vr == 0 and vi == 0:
                    continue
                acc_re += a[0] * vr - a[1] * vi
                acc_im += a[0] * vi + a[1] * vr
            # pivot * x_c = -acc
            p = row[c]
            n = p[0] * p[0] + p[1] * p[1]
            xr = -(acc_re * p[0] + acc_im * p[1]) / n
            xi = -(acc_im * p[0] - acc_re * p[1]) / n
            vec[c] = (xr, xi)
        basis.append(vec)
    return basis

"""Fraction-free elimination over polynomial rings and over the integers.

Both variants are Gauss-Jordan with exact division by the previous pivot, so
after k steps every entry is a k-by-k minor and all pivots share one common
value.  That keeps coefficient growth polynomial and needs no fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from . import _meter
from .arith import Poly


def _size(x) -> int:
    if isinstance(x, Poly):
        return len(x.terms) * (x.total_degree() + 1)
    return abs(x).bit_length()


def _iszero(x) -> bool:
    return x.is_zero() if isinstance(x, Poly) else x == 0


def _exdiv(a, b):
    if isinstance(a, Poly):
        return a.exquo(b)
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return q


class _Counter:
    """Counts scalar multiplications for integer matrices (polys count themselves)."""

    def __init__(self, numeric: bool):
        self.numeric = numeric
        self.count = 0

    def mul(self, a, b):
        if self.numeric:
            self.count += 1
            return a * b
        return a * b


def gauss_jordan(rows: list[list], col_order: Sequence[int] | None = None):
    """Reduce in place; returns (pivots [(row, col)], common pivot value)."""
    if not rows:
        return [], 1
    ncols = len(rows[0])
    m = len(rows)
    numeric = not isinstance(rows[0][0], Poly)
    if numeric:
        one = 1
    else:
        one = rows[0][0].ring.one
    order = list(col_order) if col_order is not None else list(range(ncols))
    ctr = _Counter(numeric)
    prev = one
    r = 0
    pivots: list[tuple[int, int]] = []
    pivot_cols: set[int] = set()
    for c in order:
        if r >= m:
            break
        cand = [i for i in range(r, m) if not _iszero(rows[i][c])]
        if not cand:
            continue
        p = min(cand, key=lambda i: (_size(rows[i][c]), i))
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        active = [j for j in range(ncols) if j not in pivot_cols and j != c]
        zero = 0 if numeric else one.ring.zero
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            fz = _iszero(f)
            for j in active:
                x, y = row[j], prow[j]
                val = ctr.mul(piv, x) if not _iszero(x) else zero
                if not fz and not _iszero(y):
                    val = val - ctr.mul(f, y)
                row[j] = _exdiv(val, prev) if not _iszero(val) else zero
            row[c] = zero
            for pr, pc in pivots:
                if pr == i:
                    row[pc] = piv
        prev = piv
        pivots.append((r, c))
        pivot_cols.add(c)
        r += 1
    if numeric:
        _meter.add_mults(ctr.count)
    return pivots, prev


def nullspace_vector(rows: list[list], special: Sequence[int], col_order: Sequence[int] | None = None):
    """A null vector with some ``special`` coordinate nonzero, or None.

    ``rows`` is consumed.  Free special columns are tried first.
    """
    if not rows:
        raise ValueError("empty system")
    ncols = len(rows[0])
    numeric = not isinstance(rows[0][0], Poly)
    zero = 0 if numeric else rows[0][0].ring.zero
    pivots, d = gauss_jordan(rows, col_order)
    pcols = {c: r for r, c in pivots}
    free = [c for c in range(ncols) if c not in pcols]
    spec = set(special)
    tries = [c for c in free if c in spec] + [c for c in free if c not in spec]
    for f in tries:
        v = [zero] * ncols
        v[f] = d
        for c, r in pcols.items():
            x = rows[r][f]
            v[c] = -x if not _iszero(x) else zero
        if any(not _iszero(v[c]) for c in spec):
            return v
    return None


def integer_rows(rows: list[list]) -> list[list[int]]:
    """Scale each row of rationals to a primitive integer row."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        ir = [int(x * den) for x in row]
        g = 0
        for x in ir:
            g = math.gcd(g, x)
        out.append([x // g for x in ir] if g > 1 else ir)
    return out


def determinant(matrix: list[list]):
    """Bareiss determinant of a square matrix of polynomials or integers."""
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return 1
    numeric = not isinstance(a[0][0], Poly)
    one = 1 if numeric else a[0][0].ring.one
    zero = 0 if numeric else a[0][0].ring.zero
    sign = 1
    prev = one
    for k in range(n - 1):
        if _iszero(a[k][k]):
            for i in range(k + 1, n):
                if not _iszero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return zero
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                val = akk * a[i][j]
                if not _iszero(aik) and not _iszero(a[k][j]):
                    val = val - aik * a[k][j]
                a[i][j] = _exdiv(val, prev) if not _iszero(val) else val
        prev = akk
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det

"""Exact dense linear algebra over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from ..errors import SingularError
from .polynomial import as_fraction

Matrix = List[List[Fraction]]


def _copy(M: Sequence[Sequence]) -> Matrix:
    return [[as_fraction(x) for x in row] for row in M]


def rref(M: Sequence[Sequence]):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    A = _copy(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        pivot_row = A[r]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], pivot_row)]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1]) if M else 0


def nullspace(M: Sequence[Sequence], cols: int | None = None) -> List[List[Fraction]]:
    """Exact basis of ker(M), one vector per free column.

    ``cols`` is needed only when M has no rows.
    """
    if not M:
        n = cols or 0
        return [[Fraction(int(i == k)) for i in range(n)] for k in range(n)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            vec[pc] = -row[f]
        basis.append(vec)
    return basis


def matvec(M: Sequence[Sequence], x: Sequence) -> List[Fraction]:
    return [sum((as_fraction(a) * b for a, b in zip(row, x)), Fraction(0)) for row in M]


def det3(M: Sequence[Sequence]):
    (a, b, c), (d, e, f), (g, h, i) = M
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def solve3(M: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Cramer's rule for a 3x3 system; raises SingularError if det(M) == 0."""
    M = _copy(M)
    b = [as_fraction(x) for x in b]
    d = det3(M)
    if d == 0:
        raise SingularError("singular 3x3 system")
    out = []
    for k in range(3):
        Mk = [row[:] for row in M]
        for r in range(3):
            Mk[r][k] = b[r]
        out.append(det3(Mk) / d)
    return out

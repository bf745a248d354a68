"""Exact integer and rational matrix algebra.

Matrices are tuples of row tuples.  Integer entries are Python ints, so
there is no overflow anywhere; rationals are ``fractions.Fraction`` which
are always kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotPositiveDefinite

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def det(a) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    d = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            d = -d
        d *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return d


def inverse(a) -> RatMatrix:
    n = len(a)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return tuple(tuple(r[n:]) for r in m)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SNFResult:
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))


def smith_normal_form(M: Sequence[Sequence[int]]) -> SNFResult:
    """Return D, U, V with U*M*V = D, U and V unimodular.

    The pivot is always the nonzero entry of least absolute value in the
    remaining block, which keeps intermediate entries small.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t + 1, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, None)
                for j in range(t + 1, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), None, j)
                if best[0] < abs(A[t][t]):
                    if best[1] is not None:
                        swap_rows(t, best[1])
                    else:
                        swap_cols(t, best[2])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return SNFResult(as_matrix(A), as_matrix(U), as_matrix(V))


def invariant_factors(M) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form, including the 1s."""
    return tuple(d for d in smith_normal_form(M).diagonal if d)


# ---------------------------------------------------------------------------
# Rational diagonalisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalDiagonalization:
    P: RatMatrix
    D: tuple[Fraction, ...]

    def signature(self) -> tuple[int, int, int]:
        return (sum(d > 0 for d in self.D), sum(d < 0 for d in self.D), sum(d == 0 for d in self.D))


def congruent_diagonalize(G: Sequence[Sequence[int]]) -> RationalDiagonalization:
    """Find P with P^T G P diagonal, by symmetric Gaussian elimination."""
    n = len(G)
    A = [[Fraction(x) for x in r] for r in G]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_op(dst, src, c):
        # e_dst <- e_dst + c e_src  (congruence on A, column op on P)
        for r in P:
            r[dst] += c * r[src]
        for r in A:
            r[dst] += c * r[src]
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]

    def swap(i, j):
        for r in P:
            r[i], r[j] = r[j], r[i]
        for r in A:
            r[i], r[j] = r[j], r[i]
        A[i], A[j] = A[j], A[i]

    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    continue
                col_op(k, j, Fraction(1))
        for j in range(k + 1, n):
            if A[k][j]:
                col_op(j, k, -A[k][j] / A[k][k])
    return RationalDiagonalization(tuple(map(tuple, P)), tuple(A[i][i] for i in range(n)))


@dataclass(frozen=True)
class Cholesky:
    """G = R^T diag(D) R with R unit upper triangular."""

    R: RatMatrix
    D: tuple[Fraction, ...]

    def as_diagonalization(self) -> RationalDiagonalization:
        return RationalDiagonalization(inverse(self.R), self.D)


def cholesky_rational(G: Sequence[Sequence[int]]) -> Cholesky:
    n = len(G)
    R = [[Fraction(0)] * n for _ in range(n)]
    D = []
    for i in range(n):
        R[i][i] = Fraction(1)
        d = Fraction(G[i][i]) - sum(D[k] * R[k][i] ** 2 for k in range(i))
        if d <= 0:
            raise NotPositiveDefinite(f"pivot {i} is {d}")
        D.append(d)
        for j in range(i + 1, n):
            s = Fraction(G[i][j]) - sum(D[k] * R[k][i] * R[k][j] for k in range(i))
            R[i][j] = s / d
    return Cholesky(tuple(map(tuple, R)), tuple(D))


def dot3(x, G, y) -> Fraction:
    """x^T G y with exact rational arithmetic."""
    return sum((Fraction(x[i]) * sum(Fraction(g) * Fraction(t) for g, t in zip(row, y))
                for i, row in enumerate(G) if x[i]), Fraction(0))

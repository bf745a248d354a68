"""Dense linear algebra over the prime field F_p on small integer lists."""

from __future__ import annotations


def row_reduce(rows, p: int):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = [[x % p for x in r] for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, p: int) -> int:
    if not rows:
        return 0
    return len(row_reduce(rows, p)[1])


def det(rows, p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return d % p


def nullspace(rows, p: int, ncols: int | None = None):
    """Basis (list of vectors) of {x : rows . x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    red, pivots = row_reduce(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in zip(red, pivots):
            v[c] = (-r[f]) % p
        basis.append(v)
    return basis


def extend_basis(sub, ambient, p: int):
    """Vectors from `ambient` that complete the span of `sub` to the span of `ambient`."""
    current = [list(v) for v in sub]
    r = rank(current, p) if current else 0
    extra = []
    for v in ambient:
        if rank(current + [list(v)], p) > r:
            current.append(list(v))
            extra.append(list(v))
            r += 1
    return extra


def inverse(rows, p: int):
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = row_reduce(aug, p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix not invertible mod p")
    return [r[n:] for r in red]


def matmul(a, b, p: int):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def diagonalize_symmetric(M, p: int):
    """Return (P, diag) with P^T M P = diag(diag) mod p, p odd."""
    n = len(M)
    A = [[x % p for x in r] for r in M]
    P = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst, src, c):
        for r in P:
            r[dst] = (r[dst] + c * r[src]) % p
        for r in A:
            r[dst] = (r[dst] + c * r[src]) % p
        A[dst] = [(x + c * y) % p for x, y in zip(A[dst], A[src])]

    def swap(i, j):
        for r in P:
            r[i], r[j] = r[j], r[i]
        for r in A:
            r[i], r[j] = r[j], r[i]
        A[i], A[j] = A[j], A[i]

    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j]), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j]), None)
                if j is None:
                    continue
                col_op(k, j, 1)
        inv = pow(A[k][k], -1, p)
        for j in range(k + 1, n):
            if A[k][j]:
                col_op(j, k, (-A[k][j] * inv) % p)
    return P, [A[i][i] for i in range(n)]


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1

"""Local Jordan decompositions and genus-symbol text.

For odd p the symbol lists every Jordan constituent q^{eps n} with q the
scale, n the rank and eps the Legendre symbol of the unit part of its
determinant.  At p = 2 only (scale, rank, even/odd) per block is recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import modp


def _val(x: Fraction, p: int) -> int:
    if x == 0:
        return 10 ** 9
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit(x: Fraction, p: int) -> int:
    """The p-adic unit part of x reduced mod p."""
    v = _val(x, p)
    y = x / Fraction(p) ** v
    return y.numerator * pow(y.denominator, -1, p) % p


@dataclass(frozen=True)
class JordanBlock:
    valuation: int
    rank: int
    sign: int | None = None  # odd p: Legendre symbol of the unit determinant
    even: bool | None = None  # p = 2: block type II (even) or I (odd)


@dataclass(frozen=True)
class GenusSymbol:
    p: int
    blocks: tuple[JordanBlock, ...]

    def text(self) -> str:
        parts = []
        for b in self.blocks:
            q = self.p ** b.valuation
            if self.p == 2:
                parts.append(f"{q}^{{{b.rank}}}_{'II' if b.even else 'I'}")
            else:
                parts.append(f"{q}^{{{'+' if b.sign > 0 else '-'}{b.rank}}}")
        return " ".join(parts)

    def __str__(self):
        return self.text()


def jordan_decomposition(gram, p: int) -> list[tuple[int, list[list[Fraction]]]]:
    """Split the form over Z_p into blocks; returns (valuation, block Gram) pairs."""
    A = [[Fraction(x) for x in r] for r in gram]
    n = len(A)
    alive = list(range(n))
    out = []

    def eliminate(piv):
        # remove the span of piv from the remaining coordinates
        B = [[A[i][j] for j in piv] for i in piv]
        if len(piv) == 1:
            inv = [[1 / B[0][0]]]
        else:
            d = B[0][0] * B[1][1] - B[0][1] * B[1][0]
            inv = [[B[1][1] / d, -B[0][1] / d], [-B[1][0] / d, B[0][0] / d]]
        rest = [k for k in alive if k not in piv]
        for k in rest:
            c = [sum(inv[a][b] * A[piv[b]][k] for b in range(len(piv))) for a in range(len(piv))]
            for m in alive:
                A[k][m] -= sum(c[a] * A[piv[a]][m] for a in range(len(piv)))
            for m in alive:
                A[m][k] = A[k][m]
        out.append((min(_val(B[i][j], p) for i in range(len(piv)) for j in range(len(piv))), B))
        for i in piv:
            alive.remove(i)

    while alive:
        vmin = min(_val(A[i][j], p) for i in alive for j in alive)
        diag = [i for i in alive if _val(A[i][i], p) == vmin]
        if diag:
            eliminate([diag[0]])
            continue
        i, j = next((i, j) for i in alive for j in alive if i < j and _val(A[i][j], p) == vmin)
        if p != 2:
            # e_i <- e_i + e_j gives a diagonal entry of valuation vmin
            aii = A[i][i] + 2 * A[i][j] + A[j][j]
            for m in alive:
                A[i][m] += A[j][m]
                A[m][i] = A[i][m]
            A[i][i] = aii
            eliminate([i])
        else:
            eliminate([i, j])
    return out


def local_genus_symbol(L, p: int) -> GenusSymbol:
    blocks = jordan_decomposition(L.gram, p)
    by_val: dict[int, list] = {}
    for v, B in blocks:
        by_val.setdefault(v, []).append(B)
    out = []
    for v in sorted(by_val):
        Bs = by_val[v]
        rank = sum(len(B) for B in Bs)
        if p == 2:
            even = all(len(B) == 2 for B in Bs)
            out.append(JordanBlock(v, rank, even=even))
        else:
            u = 1
            for B in Bs:
                u = u * _unit(B[0][0], p) % p
            out.append(JordanBlock(v, rank, sign=modp.legendre(u, p)))
    return GenusSymbol(p, tuple(out))

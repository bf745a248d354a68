"""Short vectors of positive definite lattices (exact Fincke-Pohst)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt

import numpy as np

from . import exact
from .errors import NotPositiveDefinite
from .lattice import Lattice, divisibility


@dataclass(frozen=True)
class ShortVectorReport:
    """Vectors with 0 < norm <= max_norm, one per +-pair (first nonzero coordinate positive)."""

    max_norm: int
    vectors: dict = field(repr=False)  # norm -> sorted list of coordinate tuples

    @property
    def pair_counts(self) -> dict:
        return {n: len(v) for n, v in sorted(self.vectors.items())}

    @property
    def counts(self) -> dict:
        """Number of vectors of each norm, counting v and -v separately."""
        return {n: 2 * len(v) for n, v in sorted(self.vectors.items())}

    def all_vectors(self, norm: int) -> list:
        half = self.vectors.get(norm, [])
        return half + [tuple(-x for x in v) for v in half]


def _canonical(v):
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def short_vectors(L: Lattice, max_norm: int) -> ShortVectorReport:
    try:
        ch = exact.cholesky_rational(L.gram)
    except NotPositiveDefinite:
        raise NotPositiveDefinite(f"{L.label} is not positive definite") from None
    n = L.rank
    R, D = ch.R, ch.D
    found: dict[int, list] = {}
    x = [0] * n

    def rec(i: int, budget: Fraction, all_zero: bool):
        # center of coordinate i given x_{i+1..n-1}
        c = -sum((R[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = budget / D[i]
        s = isqrt(floor(r)) + 1
        lo = floor(c) - s
        hi = floor(c) + s + 1
        if all_zero:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            t = xi - c
            used = D[i] * t * t
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                if all_zero and xi == 0:
                    continue
                v = tuple(x)
                nv = L.norm(v)
                found.setdefault(nv, []).append(_canonical(v))
            else:
                rec(i - 1, budget - used, all_zero and xi == 0)
        x[i] = 0

    if n:
        rec(n - 1, Fraction(max_norm), True)
    return ShortVectorReport(max_norm, {k: sorted(v) for k, v in sorted(found.items())})


def has_roots(L: Lattice) -> bool:
    return bool(short_vectors(L, 2).vectors.get(2))


def vectors_norm_div(L: Lattice, norm: int, div: int) -> list:
    """All vectors (both signs) of the given norm and divisibility."""
    rep = short_vectors(L, norm)
    return sorted(v for v in rep.all_vectors(norm) if divisibility(L, v) == div)


@dataclass(frozen=True)
class A2Statistics:
    roots: int
    partners_per_root: tuple[int, ...]
    ordered_pairs: int
    subsystems: int


def a2_statistics(L: Lattice) -> A2Statistics:
    roots = short_vectors(L, 2).all_vectors(2)
    if not roots:
        return A2Statistics(0, (), 0, 0)
    Rm = np.array(roots, dtype=np.int64)
    G = np.array(L.gram, dtype=np.int64)
    ip = Rm @ G @ Rm.T
    per_root = (ip == -1).sum(axis=1)
    pairs = int(per_root.sum())
    # each A2 has 6 roots and 12 ordered pairs with pairing -1
    return A2Statistics(len(roots), tuple(sorted(set(int(k) for k in per_root))), pairs, pairs // 12)


def count_a2_subsystems(L: Lattice) -> int:
    return a2_statistics(L).subsystems

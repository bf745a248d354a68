"""Integral lattices given by Gram matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from pathlib import Path
from typing import Sequence

from . import exact
from .errors import Degenerate, OddLattice, ParseError, ZeroVector


@dataclass(frozen=True)
class Lattice:
    gram: exact.IntMatrix
    label: str = ""

    def __post_init__(self):
        g = exact.as_matrix(self.gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise ParseError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ParseError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        if n and exact.det(g) == 0:
            raise Degenerate(f"lattice {self.label!r} has determinant 0")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return int(exact.det(self.gram)) if self.rank else 1

    def norm(self, v: Sequence[int]) -> int:
        return self.inner(v, v)

    def inner(self, v: Sequence[int], w: Sequence[int]) -> int:
        return sum(v[i] * sum(g * x for g, x in zip(row, w)) for i, row in enumerate(self.gram))

    def __repr__(self):
        return f"Lattice({self.label or '?'}, rank={self.rank})"


def lattice(rows, label: str = "") -> Lattice:
    return Lattice(exact.as_matrix(rows), label)


def signature(L: Lattice) -> tuple[int, int]:
    pos, neg, zero = exact.congruent_diagonalize(L.gram).signature()
    if zero:
        raise Degenerate(f"{L.label} is degenerate")
    return pos, neg


def is_positive_definite(L: Lattice) -> bool:
    return signature(L)[1] == 0


def rescale(L: Lattice, m: int, label: str | None = None) -> Lattice:
    if m == 1:
        return L
    if label is None:
        label = f"{L.label}({m})"
    return Lattice(tuple(tuple(m * x for x in r) for r in L.gram), label)


def direct_sum(*parts: Lattice, label: str | None = None) -> Lattice:
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i, r in enumerate(p.gram):
            g[off + i][off:off + p.rank] = r
        off += p.rank
    if label is None:
        label = "+".join(p.label for p in parts)
    return Lattice(exact.as_matrix(g), label)


def is_even(L: Lattice) -> bool:
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def divisibility(L: Lattice, v: Sequence[int]) -> int:
    """Positive generator of the ideal <v, L>."""
    if not any(v):
        raise ZeroVector("divisibility of the zero vector")
    d = 0
    for x in exact.matvec(L.gram, v):
        d = gcd(d, x)
    return d


def discriminant_group(L: Lattice):
    """D(L) = L*/L with its discriminant form; see fqm.discriminant_module."""
    if not is_even(L):
        raise OddLattice(f"{L.label} is not even")
    from .fqm import discriminant_module
    return discriminant_module(L)


def dual_vector_norm(L: Lattice, x: Sequence[Fraction]) -> Fraction:
    return sum(Fraction(x[i]) * sum(g * Fraction(y) for g, y in zip(row, x)) for i, row in enumerate(L.gram))


# -- file format -------------------------------------------------------------

def lattice_from_dict(d: dict) -> Lattice:
    try:
        gram = d["gram"]
        label = str(d.get("label", ""))
    except (TypeError, KeyError) as e:
        raise ParseError(f"lattice document needs a 'gram' field: {e}") from None
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise ParseError("gram must be an array of integer arrays")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in gram for x in r):
        raise ParseError("gram entries must be integers")
    return Lattice(exact.as_matrix(gram), label)


def lattice_to_dict(L: Lattice) -> dict:
    return {"label": L.label, "gram": [list(r) for r in L.gram]}


def load_lattice(path) -> Lattice:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from None
    return lattice_from_dict(doc)

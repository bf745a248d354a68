"""Finite quadratic modules and finite orthogonal geometry over F_2 and F_3.

A module is stored on independent generators g_1..g_k of orders d_1..d_k
(so the group is the direct sum of the Z/d_i) together with a rational
"value matrix" Qm: Qm[i][i] = q(g_i) in [0, 2) and Qm[i][j] = b(g_i, g_j)
in [0, 1).  Then q(a) = a^T Qm a mod 2 and b(a, c) = a^T Qm c mod 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Iterator, Sequence

from . import exact, modp
from .errors import (Defective, HalfIntegerValues, NoIsometricSubgroup, NotElementary,
                     TooLarge, UnsupportedCodimension, UnsupportedPrime)


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x // m)


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Finite quadratic modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualLink:
    """Ties module generators to dual-lattice vectors of a lattice L.

    Coordinate j of a dual vector x is  mult[j] * (UG . x)[row[j]]  mod d_j,
    where UG = U * gram comes from the Smith form of the Gram matrix.
    """

    UG: exact.IntMatrix
    rows: tuple[int, ...]
    mults: tuple[int, ...]
    gens: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FiniteQuadraticModule:
    orders: tuple[int, ...]
    Qm: tuple[tuple[Fraction, ...], ...]
    link: DualLink | None = field(default=None, compare=False)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        k = len(self.orders)
        Q = [[Fraction(self.Qm[i][j]) for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(k):
                Q[i][j] = _mod(Q[i][j], 2 if i == j else 1)
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        object.__setattr__(self, "Qm", tuple(map(tuple, Q)))

    # -- group structure --
    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders)

    def is_trivial(self) -> bool:
        return self.order == 1

    def reduce(self, a) -> tuple[int, ...]:
        return tuple(int(x) % d for x, d in zip(a, self.orders))

    def add(self, a, c):
        return tuple((x + y) % d for x, y, d in zip(a, c, self.orders))

    def scale(self, n: int, a):
        return tuple((n * x) % d for x, d in zip(a, self.orders))

    def zero(self):
        return (0,) * self.ngens

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.orders))

    def element_order(self, a) -> int:
        o = 1
        for x, d in zip(a, self.orders):
            o = o * (d // gcd(x, d)) // gcd(o, d // gcd(x, d))
        return o

    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors d_1 | d_2 | ... (all > 1) of the underlying group."""
        if not self.orders:
            return ()
        diag = [[d if i == j else 0 for j, _ in enumerate(self.orders)] for i, d in enumerate(self.orders)]
        return tuple(d for d in exact.smith_normal_form(diag).diagonal if d > 1)

    def length(self, p: int) -> int:
        """Minimal number of generators of the p-part."""
        return sum(1 for d in self.invariant_factors() if d % p == 0)

    # -- forms --
    def q(self, a) -> Fraction:
        k = self.ngens
        s = Fraction(0)
        for i in range(k):
            if a[i]:
                s += a[i] * a[i] * self.Qm[i][i]
                for j in range(i + 1, k):
                    if a[j]:
                        s += 2 * a[i] * a[j] * self.Qm[i][j]
        return _mod(s, 2)

    def b(self, a, c) -> Fraction:
        s = Fraction(0)
        for i in range(self.ngens):
            if a[i]:
                for j in range(self.ngens):
                    if c[j]:
                        s += a[i] * c[j] * self.Qm[i][j]
        return _mod(s, 1)

    def negate(self) -> "FiniteQuadraticModule":
        return FiniteQuadraticModule(self.orders, tuple(tuple(-x for x in r) for r in self.Qm),
                                     self.link, f"-{self.label}" if self.label else "")

    def direct_sum(self, other: "FiniteQuadraticModule") -> "FiniteQuadraticModule":
        k, l = self.ngens, other.ngens
        Q = [[Fraction(0)] * (k + l) for _ in range(k + l)]
        for i in range(k):
            Q[i][:k] = self.Qm[i]
        for i in range(l):
            Q[k + i][k:] = other.Qm[i]
        return FiniteQuadraticModule(self.orders + other.orders, tuple(map(tuple, Q)))

    def q_values(self) -> dict[Fraction, int]:
        """Multiset of q-values over all elements (an isometry invariant)."""
        out: dict[Fraction, int] = {}
        for a in self.elements():
            v = self.q(a)
            out[v] = out.get(v, 0) + 1
        return dict(sorted(out.items()))

    def sub_module(self, gens: Sequence[Sequence[int]], orders: Sequence[int]) -> "FiniteQuadraticModule":
        """Module on the given (assumed independent) elements of the stated orders."""
        k = len(gens)
        Q = [[self.q(gens[i]) if i == j else self.b(gens[i], gens[j]) for j in range(k)] for i in range(k)]
        return FiniteQuadraticModule(tuple(orders), tuple(map(tuple, Q)))

    # -- lattice link --
    def coords(self, x: Sequence[Fraction]) -> tuple[int, ...]:
        """Coordinates of a dual-lattice vector (given in lattice basis coordinates)."""
        if self.link is None:
            raise ValueError("module is not attached to a lattice")
        y = exact.matvec(self.link.UG, [Fraction(t) for t in x])
        out = []
        for r, m, d in zip(self.link.rows, self.link.mults, self.orders):
            v = y[r]
            if v.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            out.append(int(v) * m % d)
        return tuple(out)

    def action_matrix(self, M: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
        """Matrix (columns = images of generators) of the isometry M of the lattice."""
        cols = [self.coords(exact.matvec(M, g)) for g in self.link.gens]
        return tuple(tuple(c[i] for c in cols) for i in range(self.ngens))

    def __repr__(self):
        return f"FQM({'x'.join(f'Z/{d}' for d in self.orders) or '0'})"


def discriminant_module(L) -> FiniteQuadraticModule:
    """D(L) on the generators V[:, i] / d_i from the Smith form U G V = D."""
    snf = exact.smith_normal_form(L.gram)
    diag = snf.diagonal
    idx = [i for i, d in enumerate(diag) if d > 1]
    if any(diag[i] == 0 for i in range(len(diag))):
        raise ValueError("degenerate lattice")
    n = L.rank
    gens = tuple(tuple(Fraction(snf.V[r][i], diag[i]) for r in range(n)) for i in idx)
    Q = [[exact.dot3(gi, L.gram, gj) for gj in gens] for gi in gens]
    UG = exact.matmul(snf.U, L.gram)
    link = DualLink(UG, tuple(idx), (1,) * len(idx), gens)
    return FiniteQuadraticModule(tuple(diag[i] for i in idx), tuple(map(tuple, Q)), link, f"D({L.label})")


def p_part(D: FiniteQuadraticModule, p: int) -> FiniteQuadraticModule:
    gens, orders, rows, mults, lgens = [], [], [], [], []
    for i, d in enumerate(D.orders):
        pk = 1
        while d % (pk * p) == 0:
            pk *= p
        if pk == 1:
            continue
        m = d // pk
        e = [0] * D.ngens
        e[i] = m
        gens.append(e)
        orders.append(pk)
        if D.link is not None:
            rows.append(D.link.rows[i])
            mults.append(D.link.mults[i] * pow(m, -1, pk) % pk)
            lgens.append(tuple(m * x for x in D.link.gens[i]))
    sub = D.sub_module(gens, orders)
    link = DualLink(D.link.UG, tuple(rows), tuple(mults), tuple(lgens)) if D.link is not None else None
    return FiniteQuadraticModule(sub.orders, sub.Qm, link, f"{D.label}_{p}")


def primes_of(D: FiniteQuadraticModule) -> list[int]:
    return prime_factors(D.order) if D.order > 1 else []


# ---------------------------------------------------------------------------
# Quadratic spaces over F_3
# ---------------------------------------------------------------------------

def orth_order_odd(q: int, dim: int, plus: bool | None = None) -> int:
    """|O(V)| for a regular quadratic space of dimension dim over F_q, q odd."""
    if dim == 0:
        return 1
    if dim % 2:
        n = (dim - 1) // 2
        return 2 * q ** (n * n) * prod(q ** (2 * i) - 1 for i in range(1, n + 1))
    n = dim // 2
    sign = -1 if plus else 1
    return 2 * q ** (n * (n - 1)) * (q ** n + sign) * prod(q ** (2 * i) - 1 for i in range(1, n))


def gl_order(q: int, n: int) -> int:
    return prod(q ** n - q ** i for i in range(n))


@dataclass(frozen=True)
class F3Space:
    """Quadratic space over F_3 with Gram matrix M; Q(x) = x^T M x.

    For a 3-elementary module, q(x) = (2/3) Q(x) mod 2.
    """

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "gram", tuple(tuple(int(x) % 3 for x in r) for r in self.gram))

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def radical_dim(self) -> int:
        return self.dim - (modp.rank(self.gram, 3) if self.dim else 0)

    @property
    def is_regular(self) -> bool:
        return self.radical_dim == 0

    @property
    def nondegenerate_part(self) -> tuple[int, ...]:
        """Diagonal entries of a diagonalization of V / rad V."""
        if not self.dim:
            return ()
        _, d = modp.diagonalize_symmetric(self.gram, 3)
        return tuple(x for x in d if x)

    @property
    def det_class(self) -> int:
        """Determinant of the regular quotient, as 1 (square) or -1 (= epsilon)."""
        d = prod(self.nondegenerate_part) % 3
        return 1 if d == 1 else -1

    @property
    def plus_minus(self) -> str:
        n2 = self.dim - self.radical_dim
        if self.radical_dim or n2 % 2:
            return "not-applicable"
        return "plus" if self.det_class == (-1) ** (n2 // 2) else "minus"

    def Q(self, x) -> int:
        return sum(x[i] * self.gram[i][j] * x[j] for i in range(self.dim) for j in range(self.dim)) % 3

    def to_fqm(self) -> FiniteQuadraticModule:
        k = self.dim
        Q = [[Fraction(2 * self.gram[i][j], 3) for j in range(k)] for i in range(k)]
        return FiniteQuadraticModule((3,) * k, tuple(map(tuple, Q)))

    @classmethod
    def diagonal(cls, entries) -> "F3Space":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


def f3_space_from(D3: FiniteQuadraticModule) -> F3Space:
    if any(d != 3 for d in D3.orders):
        raise NotElementary(f"invariant factors {D3.orders} are not all 3")
    k = D3.ngens
    # Qm entries lie in (1/3)Z; M = (3/2) Qm mod 3
    M = [[int(D3.Qm[i][j] * 3) * 2 % 3 for j in range(k)] for i in range(k)]
    return F3Space(tuple(map(tuple, M)))


def orth_order_f3(V: F3Space) -> int:
    d = V.radical_dim
    n = V.dim - d
    if n % 2:
        reg = orth_order_odd(3, n)
    else:
        reg = orth_order_odd(3, n, plus=(V.det_class == (-1) ** (n // 2)))
    return gl_order(3, d) * 3 ** (d * n) * reg


# ---------------------------------------------------------------------------
# Quadratic spaces over F_2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class F2Space:
    """Quadratic space over F_2: Q(x) = sum qd_i x_i + sum_{i<j} B_ij x_i x_j."""

    qdiag: tuple[int, ...]
    polar: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.qdiag)
        object.__setattr__(self, "qdiag", tuple(int(x) % 2 for x in self.qdiag))
        object.__setattr__(self, "polar", tuple(tuple(0 if i == j else int(self.polar[i][j]) % 2
                                                      for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.qdiag)

    def Q(self, x) -> int:
        s = sum(a * b for a, b in zip(self.qdiag, x))
        for i in range(self.dim):
            if x[i]:
                for j in range(i + 1, self.dim):
                    s += x[j] * self.polar[i][j]
        return s % 2

    @property
    def is_nondefective(self) -> bool:
        return modp.rank(self.polar, 2) == self.dim if self.dim else True

    def zero_count(self) -> int:
        return sum(1 for x in itertools.product((0, 1), repeat=self.dim) if self.Q(x) == 0)

    @property
    def type(self) -> str:
        if self.dim == 0:
            return "type2"
        if not self.is_nondefective:
            return "defective"
        m = self.dim // 2
        return "type2" if self.zero_count() == 2 ** (2 * m - 1) + 2 ** (m - 1) else "type3"

    def to_fqm(self) -> FiniteQuadraticModule:
        n = self.dim
        Q = [[Fraction(self.qdiag[i]) if i == j else Fraction(self.polar[i][j], 2) for j in range(n)]
             for i in range(n)]
        return FiniteQuadraticModule((2,) * n, tuple(map(tuple, Q)))

    @classmethod
    def standard(cls, m: int, kind: str = "type2") -> "F2Space":
        """Normal form: sum x_i x_{i+m}, or with the last plane x^2 + xy + y^2."""
        n = 2 * m
        qd = [0] * n
        B = [[0] * n for _ in range(n)]
        for i in range(m):
            B[i][i + m] = B[i + m][i] = 1
        if kind == "type3" and m:
            qd[m - 1] = qd[n - 1] = 1
        return cls(tuple(qd), tuple(map(tuple, B)))


def f2_space_from(D2: FiniteQuadraticModule) -> F2Space:
    if any(d != 2 for d in D2.orders):
        raise NotElementary(f"invariant factors {D2.orders} are not all 2")
    qd = []
    for i in range(D2.ngens):
        v = D2.Qm[i][i]
        if v.denominator != 1:
            raise HalfIntegerValues(f"q(g_{i}) = {v} is not integral")
        qd.append(int(v))
    B = [[int(D2.Qm[i][j] * 2) % 2 for j in range(D2.ngens)] for i in range(D2.ngens)]
    return F2Space(tuple(qd), tuple(map(tuple, B)))


def orth_order_f2(V: F2Space, k: int = 2) -> int:
    if V.dim == 0:
        return 1
    if V.dim % 2 or not V.is_nondefective:
        raise Defective("orthogonal group order needs a nondefective even-dimensional space")
    n = V.dim
    sign = -1 if V.type == "type2" else 1
    return 2 * k ** (n * (n - 2) // 4) * (k ** (n // 2) + sign) * prod(k ** (2 * i) - 1 for i in range(1, n // 2))


def full_orth_order(D: FiniteQuadraticModule) -> int:
    total = 1
    for p in primes_of(D):
        Dp = p_part(D, p)
        if p == 2:
            total *= orth_order_f2(f2_space_from(Dp))
        elif p == 3:
            total *= orth_order_f3(f3_space_from(Dp))
        else:
            raise UnsupportedPrime(f"p = {p}")
    return total


def count_injective_isometries(V: F3Space, W: F3Space) -> int:
    if not (V.is_regular and W.is_regular):
        raise UnsupportedCodimension("both spaces must be regular")
    c = W.dim - V.dim
    if c == 1:
        return orth_order_f3(W) // 2
    if c == 0:
        return orth_order_f3(W) if V.det_class == W.det_class else 0
    raise UnsupportedCodimension(f"codimension {c}")


# ---------------------------------------------------------------------------
# Brute force oracles
# ---------------------------------------------------------------------------

def _spanning_subset(D: FiniteQuadraticModule, elems) -> list:
    span = {D.zero()}
    gens = []
    for e in elems:
        if e in span:
            continue
        gens.append(e)
        new = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                t = D.add(s, e)
                if t not in new:
                    new.add(t)
                    nxt.append(t)
            frontier = nxt
        span = new
    return gens


def _homs(Dsrc, gens, Ddst, sign: int, injective: bool = True):
    """All homomorphisms from <gens> <= Dsrc to Ddst with q_dst(f x) = sign * q_src(x)."""
    results = []
    cand_cache = {}

    def candidates(g):
        key = (Dsrc.element_order(g), sign * Dsrc.q(g))
        if key not in cand_cache:
            o, val = key
            cand_cache[key] = [w for w in Ddst.elements()
                               if Ddst.scale(o, w) == Ddst.zero() and Ddst.q(w) == _mod(val, 2)]
        return cand_cache[key]

    def rec(k, table):
        if k == len(gens):
            results.append(tuple(table[g] for g in gens))
            return
        g = gens[k]
        o = Dsrc.element_order(g)
        for w in candidates(g):
            new = dict(table)
            ok = True
            for s, fs in table.items():
                x, y = s, fs
                for _ in range(1, o):
                    x = Dsrc.add(x, g)
                    y = Ddst.add(y, w)
                    if x in new:
                        if new[x] != y:
                            ok = False
                            break
                    else:
                        if Ddst.q(y) != _mod(sign * Dsrc.q(x), 2):
                            ok = False
                            break
                        new[x] = y
                if not ok:
                    break
            if not ok:
                continue
            if injective and len(set(new.values())) != len(new):
                continue
            rec(k + 1, new)

    rec(0, {Dsrc.zero(): Ddst.zero()})
    return results


def brute_force_isometries(V, W, anti: bool = False, limit: int = 3 ** 4) -> list:
    """All injective homomorphisms V -> W preserving q (or negating it if anti).

    V and W may be finite quadratic modules or F_2/F_3 spaces.  Maps are
    returned as tuples of images of V's generators.
    """
    V = V.to_fqm() if hasattr(V, "to_fqm") else V
    W = W.to_fqm() if hasattr(W, "to_fqm") else W
    if V.order > max(limit, 2 ** 6) or (V.order > limit and any(d != 2 for d in V.orders)):
        raise TooLarge(f"domain of order {V.order}")
    gens = [tuple(int(i == j) for j in range(V.ngens)) for i in range(V.ngens)]
    return _homs(V, gens, W, -1 if anti else 1)


@dataclass(frozen=True)
class GlueGroup:
    generators: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    order: int
    residual_q_values: tuple[Fraction, ...]


def subgroups_of_order(D: FiniteQuadraticModule, n: int) -> list[frozenset]:
    """All subgroups of D with n elements (as element sets), by closure search."""
    found = {frozenset([D.zero()])}
    layer = list(found)
    elems = list(D.elements())
    while layer:
        nxt = []
        for H in layer:
            for e in elems:
                if e in H:
                    continue
                new = set(H)
                frontier = list(H)
                while frontier:
                    f2 = []
                    for s in frontier:
                        t = D.add(s, e)
                        if t not in new:
                            new.add(t)
                            f2.append(t)
                    frontier = f2
                fs = frozenset(new)
                if len(fs) <= n and n % len(fs) == 0 and fs not in found:
                    found.add(fs)
                    nxt.append(fs)
        layer = nxt
    return sorted((H for H in found if len(H) == n), key=lambda H: sorted(H))


def enumerate_glue_groups(DS: FiniteQuadraticModule, DK: FiniteQuadraticModule,
                          residual_order: int, limit: int = 3 ** 8) -> list[GlueGroup]:
    """Isotropic subgroups of DS + DK with injective projections and |H^perp/H| = residual."""
    total = DS.order * DK.order
    if total > limit:
        raise TooLarge(f"|DS|*|DK| = {total}")
    if total % residual_order:
        return []
    h2 = total // residual_order
    h = round(h2 ** 0.5)
    while h * h > h2:
        h -= 1
    while (h + 1) * (h + 1) <= h2:
        h += 1
    if h * h != h2:
        return []
    D = DS.direct_sum(DK)
    out = []
    for HS in subgroups_of_order(DS, h):
        gens = _spanning_subset(DS, sorted(HS))
        for images in _homs(DS, gens, DK, -1):
            pairs = tuple((g, w) for g, w in zip(gens, images))
            hgens = [g + w for g, w in pairs]
            H = _span(D, hgens)
            perp = [x for x in D.elements() if all(D.b(x, y) == 0 for y in hgens)]
            classes = {}
            for x in perp:
                key = min(D.add(x, y) for y in H)
                classes.setdefault(key, D.q(x))
            out.append(GlueGroup(pairs, len(H), tuple(sorted(classes.values()))))
    return out


def _span(D: FiniteQuadraticModule, gens) -> set:
    span = {D.zero()}
    for g in gens:
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                t = D.add(s, g)
                if t not in span:
                    span.add(t)
                    nxt.append(t)
            frontier = nxt
    return span


# ---------------------------------------------------------------------------
# Primitive embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingVerdict:
    holds: bool | None
    reason: str
    margin: int
    thresholds: dict

    def __bool__(self):
        return bool(self.holds)


def check_unique_embedding(t_invariants, h_signature) -> EmbeddingVerdict:
    """Sufficient criterion for a unique primitive embedding of T into an even unimodular H."""
    t_plus, t_minus, DT = t_invariants
    h_plus, h_minus = h_signature
    margin = h_plus + h_minus - (t_plus + t_minus)
    odd = {p: DT.length(p) + 2 for p in primes_of(DT) if p != 2}
    if not (h_plus - t_plus > 0 and h_minus - t_minus > 0):
        return EmbeddingVerdict(False, "signature margins must be positive on both sides", margin, odd)
    for p, need in odd.items():
        if margin < need:
            return EmbeddingVerdict(False, f"length bound fails at p={p}: {margin} < {need}", margin, odd)
    l2 = DT.length(2)
    if margin < l2:
        return EmbeddingVerdict(False, f"rank margin {margin} below l(D_2) = {l2}", margin, odd)
    if margin == l2 and l2 > 0:
        return EmbeddingVerdict(None, "rank margin equals l(D_2); the 2-adic splitting test is not implemented",
                                margin, odd)
    return EmbeddingVerdict(True, "signature margins positive and rank margin exceeds every length bound", margin, odd)


def _elementary_quotient(A: FiniteQuadraticModule, p: int, sub_basis, perp_basis) -> FiniteQuadraticModule:
    extra = modp.extend_basis(sub_basis, perp_basis, p)
    return A.sub_module([tuple(v) for v in extra], [p] * len(extra))


def complement_invariants(T, ambient, glue_choice: str = "trivial"):
    """Genus invariants (signature, form) of orthogonal complements of T in the ambient lattice.

    ambient = ((m_plus, m_minus), D_M).  Returns ((m+ - t+, m- - t-), -delta).
    """
    from .lattice import discriminant_group, signature
    (m_plus, m_minus), DM = ambient
    t_plus, t_minus = signature(T)
    sig = (m_plus - t_plus, m_minus - t_minus)
    DS = discriminant_group(T)
    if glue_choice == "trivial":
        return sig, DS.negate().direct_sum(DM)
    if glue_choice != "full":
        raise ValueError(glue_choice)
    maps = brute_force_isometries(DM, DS)
    if not maps:
        raise NoIsometricSubgroup(f"no copy of {DM} inside {DS}")
    gamma = maps[0]
    # A = D(S) + D(M) with q_S + (-q_M); Gamma = {(gamma(x), x)}
    A = DS.direct_sum(DM.negate())
    pieces = []
    for p in primes_of(A):
        Ap = p_part(A, p)
        if any(d != p for d in Ap.orders):
            raise NotElementary(f"{p}-part is not elementary")
        # express the graph generators in Ap coordinates
        gam = []
        for i in range(DM.ngens):
            e = tuple(int(i == j) for j in range(DM.ngens))
            full = tuple(gamma[i]) + e
            gam.append(_to_p_coords(A, Ap, full, p))
        gam = [g for g in gam if any(g)]
        k = Ap.ngens
        bmat = [[int(Ap.b(tuple(int(i == j) for j in range(k)), g) * p) % p for i in range(k)] for g in gam]
        perp = modp.nullspace(bmat, p, k) if gam else [[int(i == j) for j in range(k)] for i in range(k)]
        pieces.append(_elementary_quotient(Ap, p, gam, perp))
    delta = pieces[0] if pieces else FiniteQuadraticModule((), ())
    for P in pieces[1:]:
        delta = delta.direct_sum(P)
    return sig, delta.negate()


def _to_p_coords(A, Ap, a, p):
    """Project an element of A onto its p-part and express it on Ap's generators."""
    out = []
    for i, d in enumerate(A.orders):
        pk = 1
        while d % (pk * p) == 0:
            pk *= p
        if pk == 1:
            continue
        m = d // pk
        out.append(a[i] * pow(m, -1, pk) % pk)
    return tuple(out)

"""Permutation and matrix groups: deterministic Schreier-Sims.

Matrix groups over a direct sum of prime fields (block diagonal, one
modulus per coordinate) are handled through their faithful permutation
action on all vectors of the module, encoded in mixed radix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import modp
from .errors import OrderMismatch

Perm = np.ndarray


def _compose(g: Perm, h: Perm) -> Perm:
    """First g, then h."""
    return h[g]


def _inverse(g: Perm) -> Perm:
    inv = np.empty_like(g)
    inv[g] = np.arange(len(g), dtype=g.dtype)
    return inv


class BSGS:
    """Base and strong generating set of a permutation group on range(n_points).

    Built by the deterministic Schreier-Sims algorithm: every Schreier
    generator is sifted, so the stabilizer chain (and hence the order) is
    exact.
    """

    def __init__(self, n_points: int, gens, base_hint=(), initial_base=()):
        self.n = n_points
        self.dtype = np.int32
        self.identity = np.arange(n_points, dtype=self.dtype)
        self.gens = [np.asarray(g, dtype=self.dtype) for g in gens]
        self.gens = [g for g in self.gens if not np.array_equal(g, self.identity)]
        self.base: list[int] = []
        self.S: list[list[Perm]] = []
        self.trans: list[dict] = []  # level -> {point: (u, u_inverse)}
        self.orbit_order: list[list[int]] = []
        self._hint = [int(b) for b in base_hint]
        for b in initial_base:
            self.base.append(int(b))
            self.S.append([])
            self.trans.append({int(b): (self.identity, self.identity)})
            self.orbit_order.append([int(b)])
        for g in self.gens:
            if all(g[b] == b for b in self.base):
                self._new_base_point(g)
        self._build()

    # -- helpers --
    def _new_base_point(self, g: Perm):
        moved = None
        for b in self._hint:
            if b not in self.base and g[b] != b:
                moved = b
                break
        if moved is None:
            moved = int(np.flatnonzero(g != self.identity)[0])
        self.base.append(moved)
        self.S.append([])
        self.trans.append({moved: (self.identity, self.identity)})
        self.orbit_order.append([moved])

    def _extend_orbit(self, level: int, new_gens):
        T = self.trans[level]
        order = self.orbit_order[level]
        queue = list(order) if new_gens is not None else []
        gens_all = self.S[level]
        # new generators on old points
        frontier = []
        for beta in queue:
            u, _ = T[beta]
            for s in new_gens or []:
                img = int(s[beta])
                if img not in T:
                    v = _compose(u, s)
                    T[img] = (v, _inverse(v))
                    order.append(img)
                    frontier.append(img)
        while frontier:
            nxt = []
            for beta in frontier:
                u, _ = T[beta]
                for s in gens_all:
                    img = int(s[beta])
                    if img not in T:
                        v = _compose(u, s)
                        T[img] = (v, _inverse(v))
                        order.append(img)
                        nxt.append(img)
            frontier = nxt

    def _add_gen(self, level: int, g: Perm):
        self.S[level].append(g)
        self._extend_orbit(level, [g])

    def strip(self, g: Perm, start: int = 0):
        for i in range(start, len(self.base)):
            beta = int(g[self.base[i]])
            t = self.trans[i].get(beta)
            if t is None:
                return g, i
            g = _compose(g, t[1])
        return g, len(self.base)

    def _build(self):
        for i in range(len(self.base)):
            for g in self.gens:
                if all(g[self.base[j]] == self.base[j] for j in range(i)):
                    self.S[i].append(g)
            T = self.trans[i]
            frontier = [self.base[i]]
            while frontier:
                nxt = []
                for beta in frontier:
                    u, _ = T[beta]
                    for s in self.S[i]:
                        img = int(s[beta])
                        if img not in T:
                            v = _compose(u, s)
                            T[img] = (v, _inverse(v))
                            self.orbit_order[i].append(img)
                            nxt.append(img)
                frontier = nxt
        checked: list[set] = [set() for _ in self.base]
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            for beta in list(self.orbit_order[i]):
                u, _ = self.trans[i][beta]
                for si, s in enumerate(self.S[i]):
                    if (beta, si) in checked[i]:
                        continue
                    checked[i].add((beta, si))
                    img = int(s[beta])
                    h = _compose(_compose(u, s), self.trans[i][img][1])
                    y, j = self.strip(h, i + 1)
                    if np.array_equal(y, self.identity):
                        continue
                    if j == len(self.base):
                        self._new_base_point(y)
                        checked.append(set())
                    for l in range(i + 1, j + 1):
                        self._add_gen(l, y)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    # -- queries --
    @property
    def orbit_lengths(self) -> list[int]:
        return [len(t) for t in self.trans]

    @property
    def order(self) -> int:
        return prod(self.orbit_lengths)

    @property
    def strong_generators(self) -> list[Perm]:
        seen, out = set(), []
        for lvl in self.S:
            for g in lvl:
                if id(g) not in seen:
                    seen.add(id(g))
                    out.append(g)
        return out

    def contains(self, g: Perm) -> bool:
        y, j = self.strip(np.asarray(g, dtype=self.dtype))
        return j == len(self.base) and np.array_equal(y, self.identity)

    def stabilizer_order(self, level: int) -> int:
        """Order of the pointwise stabilizer of base[:level]."""
        return prod(self.orbit_lengths[level:])


# ---------------------------------------------------------------------------
# Matrix groups over direct sums of prime fields
# ---------------------------------------------------------------------------

class VectorSpaceAction:
    """All vectors of Z/m_1 + ... + Z/m_n with mixed-radix point codes."""

    def __init__(self, moduli):
        self.moduli = np.array(moduli, dtype=np.int64)
        self.dim = len(moduli)
        self.size = int(prod(int(m) for m in moduli))
        w = [1]
        for m in moduli[:-1]:
            w.append(w[-1] * int(m))
        self.weights = np.array(w, dtype=np.int64)
        grids = itertools.product(*[range(int(m)) for m in reversed(moduli)])
        pts = np.array(list(grids), dtype=np.int64)[:, ::-1] if self.dim else np.zeros((1, 0), np.int64)
        self.points = pts.T.copy()  # dim x size, column c has code c

    def code(self, v) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64) % self.moduli, self.weights))

    def vector(self, c: int) -> tuple:
        return tuple(int(x) for x in self.points[:, c])

    def perm(self, M) -> Perm:
        M = np.asarray(M, dtype=np.int64).reshape(self.dim, self.dim)
        img = (M @ self.points) % self.moduli[:, None]
        return (self.weights @ img).astype(np.int32)

    def basis_codes(self) -> list[int]:
        return [int(w) for w in self.weights]


@dataclass
class MatrixGroup:
    moduli: tuple
    gens: list
    bsgs: BSGS = field(repr=False)
    action: VectorSpaceAction = field(repr=False)

    @property
    def order(self) -> int:
        return self.bsgs.order

    def contains(self, M) -> bool:
        return self.bsgs.contains(self.action.perm(M))


def bsgs_build(gens, moduli, base_hint=None) -> MatrixGroup:
    """BSGS of the group generated by integer matrices acting on column vectors mod moduli.

    moduli may be one prime (with the dimension taken from the matrices)
    or a sequence with one prime per coordinate.
    """
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    if isinstance(moduli, int):
        n = gens[0].shape[0] if gens else 0
        moduli = (moduli,) * n
    act = VectorSpaceAction(tuple(moduli))
    hint = act.basis_codes() if base_hint is None else base_hint
    perms = [act.perm(g) for g in gens]
    return MatrixGroup(tuple(moduli), gens, BSGS(act.size, perms, hint), act)


def membership(G: MatrixGroup, g) -> bool:
    return G.contains(g)


# ---------------------------------------------------------------------------
# Full orthogonal groups of F_3 / F_2 spaces
# ---------------------------------------------------------------------------

def _canonical_lines(dim: int, p: int):
    for v in itertools.product(range(p), repeat=dim):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            yield np.array(v, dtype=np.int64)


def f3_reflection(M, v) -> np.ndarray:
    """x -> x - (2 B(x, v) / Q(v)) v with B(x, y) = x^T M y."""
    M = np.asarray(M, dtype=np.int64)
    q = int(v @ M @ v) % 3
    c = 2 * pow(q, -1, 3) % 3
    return (np.eye(len(v), dtype=np.int64) - c * np.outer(v, v @ M)) % 3


def f2_transvection(V, v) -> np.ndarray:
    """x -> x + B(x, v) v for the polar form B of V."""
    B = np.asarray(V.polar, dtype=np.int64)
    return (np.eye(V.dim, dtype=np.int64) + np.outer(v, v @ B)) % 2


def _is_f2_isometry(V, M) -> bool:
    for j in range(V.dim):
        col = tuple(int(x) for x in M[:, j])
        if V.Q(col) != V.qdiag[j]:
            return False
    B = np.asarray(V.polar, dtype=np.int64)
    return np.array_equal((M.T @ B @ M) % 2 * (1 - np.eye(V.dim, dtype=np.int64)), B)


def generate_orthogonal_group(V) -> MatrixGroup:
    """Generators of O(V) for a regular F_3 space or nondefective F_2 space.

    Reflections (F_3) or orthogonal transvections (F_2) are added in a fixed
    order until the order matches the closed form; when they do not suffice
    (O^+(4, 2)) the missing isometries are found by exhaustive search.
    """
    from .fqm import F2Space, F3Space, orth_order_f2, orth_order_f3
    if isinstance(V, F3Space):
        p, target = 3, orth_order_f3(V)
        M = np.array(V.gram, dtype=np.int64)
        cands = (f3_reflection(M, v) for v in _canonical_lines(V.dim, 3) if int(v @ M @ v) % 3)
    elif isinstance(V, F2Space):
        p, target = 2, orth_order_f2(V)
        cands = (f2_transvection(V, v) for v in _canonical_lines(V.dim, 2) if V.Q(tuple(v)) == 1)
    else:
        raise TypeError(type(V))
    if V.dim == 0:
        return bsgs_build([], ())
    gens = []
    G = bsgs_build([], (p,) * V.dim)
    for g in cands:
        if G.order == target:
            break
        if not G.contains(g):
            gens.append(g)
            G = bsgs_build(gens, (p,) * V.dim)
    if G.order != target and p == 2 and V.dim <= 4:
        for entries in itertools.product((0, 1), repeat=V.dim * V.dim):
            if G.order == target:
                break
            Mx = np.array(entries, dtype=np.int64).reshape(V.dim, V.dim)
            if _is_f2_isometry(V, Mx) and modp.rank(Mx.tolist(), 2) == V.dim and not G.contains(Mx):
                gens.append(Mx)
                G = bsgs_build(gens, (p,) * V.dim)
    if G.order != target:
        raise OrderMismatch(f"generated order {G.order} != closed form {target}")
    return G

"""Automorphism groups of positive definite lattices.

The search follows Plesken and Souvignier: an isometry is determined by the
images of the basis vectors, which must be short vectors of the same norms
with the same pairwise inner products.  Levels are processed from the last
basis vector to the first; at level i the orbit of b_i under the stabilizer
of b_0..b_{i-1} is completed by trying every candidate image that is not yet
in the orbit, so the group order is the product of the orbit lengths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import exact
from .enumerate import short_vectors
from .errors import NotPositiveDefinite
from .grpact import BSGS, MatrixGroup, bsgs_build
from .lattice import Lattice, discriminant_group


@dataclass
class IsometryGroup:
    lattice: Lattice
    generators: list  # integer matrices; column j is the image of basis vector j
    order: int
    orbit_lengths: tuple
    vectors: np.ndarray = field(repr=False)  # the short vectors the search ran on
    perms: list = field(repr=False, default_factory=list)  # generator actions on `vectors`

    def check(self) -> bool:
        G = np.array(self.lattice.gram, dtype=object)
        return all((np.array(g, dtype=object).T @ G @ np.array(g, dtype=object) == G).all()
                   for g in self.generators)


class _Search:
    def __init__(self, L: Lattice, vecs: np.ndarray):
        self.L = L
        self.n = L.rank
        self.G = np.array(L.gram, dtype=np.int64)
        self.S = vecs
        self.N = len(vecs)
        self.IP = vecs @ self.G @ vecs.T
        self.norms = np.diag(self.IP).copy()
        self.index = {tuple(int(x) for x in v): k for k, v in enumerate(vecs)}
        # fingerprint: histogram of (norm(w), <v, w>) over all short vectors w
        norm_vals = sorted(set(int(x) for x in self.norms))
        m = int(self.norms.max())
        width = 2 * m + 1
        fp = np.zeros((self.N, len(norm_vals) * width), dtype=np.int64)
        for t, nv in enumerate(norm_vals):
            cols = self.norms == nv
            sub = self.IP[:, cols] + m
            for a in range(self.N):
                fp[a, t * width:(t + 1) * width] = np.bincount(sub[a], minlength=width)
        self.basis = [self.index[tuple(int(i == j) for j in range(self.n))] for i in range(self.n)]
        self.cand0 = []
        for i, b in enumerate(self.basis):
            mask = (self.norms == self.norms[b]) & (fp == fp[b]).all(axis=1)
            self.cand0.append(mask)

    def candidates(self, k: int, images: list) -> np.ndarray:
        mask = self.cand0[k].copy()
        for j, img in enumerate(images):
            mask &= self.IP[img] == self.G[k, j]
        return mask

    def extend(self, images: list):
        """Complete a partial list of basis images to an isometry, or None."""
        k = len(images)
        if k == self.n:
            return list(images)
        mask = self.candidates(k, images)
        for c in np.flatnonzero(mask):
            images.append(int(c))
            # look ahead: every later basis vector still needs a candidate
            ok = all(self.candidates(t, images).any() for t in range(k + 1, self.n))
            if ok:
                res = self.extend(images)
                if res is not None:
                    images.pop()
                    return res
            images.pop()
        return None

    def matrix(self, images) -> np.ndarray:
        return self.S[images].T.copy()

    def perm(self, M: np.ndarray) -> np.ndarray:
        img = self.S @ M.T
        return np.array([self.index[tuple(int(x) for x in r)] for r in img], dtype=np.int32)


def _orbit(perms, start: int) -> set:
    orb = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for p in perms:
                y = int(p[x])
                if y not in orb:
                    orb.add(y)
                    nxt.append(y)
        frontier = nxt
    return orb


def automorphism_generators(L: Lattice, order_hint=None) -> IsometryGroup:
    """Generators and order of O(L) for positive definite L."""
    n = L.rank
    maxdiag = max(L.gram[i][i] for i in range(n))
    try:
        rep = short_vectors(L, maxdiag)
    except NotPositiveDefinite:
        raise
    vecs = []
    for nv in sorted(rep.vectors):
        vecs.extend(rep.all_vectors(nv))
    vecs = np.array(sorted(vecs), dtype=np.int64)
    srch = _Search(L, vecs)
    minus = -np.eye(n, dtype=np.int64)
    gens = [minus]
    perms = [srch.perm(minus)]
    lengths = [0] * n
    for i in reversed(range(n)):
        fixed = srch.basis[:i]
        level_perms = [p for p, g in zip(perms, gens)
                       if all(p[b] == b for b in fixed)]
        orbit = _orbit(level_perms, srch.basis[i])
        failed: set = set()
        for c in np.flatnonzero(srch.candidates(i, fixed)):
            c = int(c)
            if c in orbit or c in failed:
                continue
            res = srch.extend(fixed + [c])
            if res is None:
                failed |= _orbit(level_perms, c)
                continue
            M = srch.matrix(res)
            gens.append(M)
            p = srch.perm(M)
            perms.append(p)
            level_perms.append(p)
            orbit = _orbit(level_perms, srch.basis[i])
        lengths[i] = len(orbit)
    return IsometryGroup(L, gens, prod(lengths), tuple(lengths), vecs, perms)


def permutation_bsgs(G: IsometryGroup) -> BSGS:
    """BSGS of O(L) acting on its short vectors (a faithful action)."""
    srch_basis = [int(np.flatnonzero((G.vectors == np.eye(G.lattice.rank, dtype=np.int64)[i]).all(axis=1))[0])
                  for i in range(G.lattice.rank)]
    return BSGS(len(G.vectors), G.perms, base_hint=srch_basis)


# ---------------------------------------------------------------------------
# Action on the discriminant group
# ---------------------------------------------------------------------------

@dataclass
class DiscriminantAction:
    module: object  # FiniteQuadraticModule D(L)
    matrices: list  # action on D(L) per generator
    per_prime: dict  # p -> (p-part module, matrices)
    image: MatrixGroup
    kernel_order: int

    @property
    def image_order(self) -> int:
        return self.image.order if self.image is not None else 1

    @property
    def injective(self) -> bool:
        return self.kernel_order == 1


def _preserves_form(D, A) -> bool:
    k = D.ngens
    cols = [tuple(A[i][j] for i in range(k)) for j in range(k)]
    for i in range(k):
        if D.q(cols[i]) != D.Qm[i][i]:
            return False
        for j in range(i + 1, k):
            if D.b(cols[i], cols[j]) != D.Qm[i][j]:
                return False
    return True


def discriminant_representation(G: IsometryGroup) -> DiscriminantAction:
    from .fqm import p_part, primes_of
    D = discriminant_group(G.lattice)
    mats = [D.action_matrix(g.tolist()) for g in G.generators]
    for A in mats:
        if not _preserves_form(D, A):
            raise AssertionError("induced action does not preserve the discriminant form")
    per = {}
    for p in primes_of(D):
        Dp = p_part(D, p)
        per[p] = (Dp, [Dp.action_matrix(g.tolist()) for g in G.generators])
    image = bsgs_build(mats, D.orders) if D.ngens else None
    kernel = _kernel_order(G, D, mats)
    return DiscriminantAction(D, mats, per, image, kernel)


def _kernel_order(G: IsometryGroup, D, mats) -> int:
    """|ker| from a BSGS on D(L) + short vectors with D's generators as the first base points."""
    from .grpact import VectorSpaceAction
    if not D.ngens:
        return G.order
    act = VectorSpaceAction(D.orders)
    off = act.size
    perms = [np.concatenate([act.perm(A), p + off]).astype(np.int32) for A, p in zip(mats, G.perms)]
    basis_pts = act.basis_codes()
    B = BSGS(off + len(G.vectors), perms, initial_base=basis_pts)
    return B.stabilizer_order(len(basis_pts))


@dataclass
class OrbitPartition:
    orbits: list
    extended: bool  # generator images left the given list and were added


def orbit_partition(G: IsometryGroup, vectors) -> OrbitPartition:
    vecs = [tuple(int(x) for x in v) for v in vectors]
    pos = {v: k for k, v in enumerate(vecs)}
    parent = list(range(len(vecs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    extended = False
    k = 0
    gens = [np.array(g, dtype=object) for g in G.generators]
    while k < len(vecs):
        v = np.array(vecs[k], dtype=object)
        for g in gens:
            w = tuple(int(x) for x in g.dot(v))
            if w not in pos:
                extended = True
                pos[w] = len(vecs)
                vecs.append(w)
                parent.append(len(parent))
            a, b = find(k), find(pos[w])
            if a != b:
                parent[max(a, b)] = min(a, b)
        k += 1
    groups: dict = {}
    for idx, v in enumerate(vecs):
        groups.setdefault(find(idx), []).append(v)
    return OrbitPartition(sorted((sorted(o) for o in groups.values()), key=lambda o: o[0]), extended)

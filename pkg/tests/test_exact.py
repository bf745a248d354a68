from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmpartners import exact
from fmpartners.errors import NotPositiveDefinite

small_ints = st.integers(-20, 20)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


def minor_gcd(M, k):
    """Determinantal divisor d_k: gcd of all k x k minors."""
    m, n = len(M), len(M[0])
    g = 0
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            g = gcd(g, int(exact.det([[M[i][j] for j in cols] for i in rows])))
    return g


def rows(M):
    return [list(r) for r in M]


def is_unimodular(U):
    return abs(exact.det(U)) == 1


def test_snf_known_values():
    assert exact.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal == (2, 6, 12)
    assert exact.invariant_factors([[2, -1], [-1, 2]]) == (1, 3)
    assert exact.invariant_factors([[0, 0], [0, 0]]) == ()


def test_snf_transform_identities_on_1000_random_matrices(rng):
    for _ in range(1000):
        m, n = (int(x) for x in rng.integers(1, 6, size=2))
        M = rng.integers(-30, 31, size=(m, n)).tolist()
        r = exact.smith_normal_form(M)
        assert rows(exact.matmul(exact.matmul(r.U, M), r.V)) == rows(r.D)
        assert is_unimodular(r.U) and is_unimodular(r.V)
        d = r.diagonal
        assert all(r.D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
        nz = [x for x in d if x]
        assert all(x > 0 for x in nz)
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert all(x == 0 for x in d[len(nz):])


@settings(max_examples=60, deadline=None)
@given(square(3))
def test_snf_matches_determinantal_divisors(M):
    d = exact.smith_normal_form(M).diagonal
    prev = 1
    prod_ = 1
    for k in range(1, 4):
        dk = minor_gcd(M, k)
        if dk == 0:
            assert all(x == 0 for x in d[k - 1:])
            break
        prod_ *= d[k - 1]
        assert prod_ == dk
        prev = dk
    assert prev > 0


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_det_and_inverse(M):
    D = exact.det(M)
    assert D == round(np.linalg.det(np.array(M, dtype=float)))
    if D:
        inv = exact.inverse(M)
        assert rows(exact.matmul(M, inv)) == [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]


@settings(max_examples=80, deadline=None)
@given(square(4))
def test_congruent_diagonalization(A):
    G = [[A[i][j] + A[j][i] for j in range(4)] for i in range(4)]
    r = exact.congruent_diagonalize(G)
    P = [list(row) for row in r.P]
    PtGP = exact.matmul(exact.matmul(exact.transpose(P), G), P)
    assert rows(PtGP) == [[r.D[i] if i == j else 0 for j in range(4)] for i in range(4)]
    assert exact.det(P) != 0
    ev = np.linalg.eigvalsh(np.array(G, dtype=float))
    if min(abs(ev)) > 1e-6:
        assert r.signature()[:2] == (int((ev > 0).sum()), int((ev < 0).sum()))


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_signature_invariant_under_unimodular_change(A):
    G = [[A[i][j] + A[j][i] for j in range(4)] for i in range(4)]
    U = [[1, 2, 0, -1], [0, 1, 3, 0], [0, 0, 1, 5], [0, 0, 0, 1]]
    G2 = exact.matmul(exact.matmul(exact.transpose(U), G), U)
    assert exact.congruent_diagonalize(G).signature() == exact.congruent_diagonalize(G2).signature()


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_cholesky_of_gram_matrices(A):
    G = exact.matmul(exact.transpose(A), A)
    G = [[G[i][j] + int(i == j) for j in range(4)] for i in range(4)]
    ch = exact.cholesky_rational(G)
    R = [list(r) for r in ch.R]
    RtDR = exact.matmul(exact.matmul(exact.transpose(R), [[ch.D[i] if i == j else 0 for j in range(4)]
                                                          for i in range(4)]), R)
    assert rows(RtDR) == G
    assert all(d > 0 for d in ch.D)
    assert all(R[i][i] == 1 and all(R[i][j] == 0 for j in range(i)) for i in range(4))
    diag = ch.as_diagonalization()
    P = [list(r) for r in diag.P]
    assert rows(exact.matmul(exact.matmul(exact.transpose(P), G), P)) == \
        [[diag.D[i] if i == j else 0 for j in range(4)] for i in range(4)]


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        exact.cholesky_rational([[0, 1], [1, 0]])
    with pytest.raises(NotPositiveDefinite):
        exact.cholesky_rational([[2, 3], [3, 2]])


def test_dot3():
    assert exact.dot3([Fraction(1, 3), 0], [[2, -1], [-1, 2]], [Fraction(1, 3), 0]) == Fraction(2, 9)

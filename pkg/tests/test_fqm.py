import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmpartners import catalog
from fmpartners.errors import Defective, HalfIntegerValues, UnsupportedCodimension
from fmpartners.fqm import (F2Space, F3Space, brute_force_isometries, check_unique_embedding,
                            complement_invariants, count_injective_isometries, enumerate_glue_groups,
                            f2_space_from, f3_space_from, full_orth_order, orth_order_f2, orth_order_f3,
                            p_part)
from fmpartners.lattice import discriminant_group, signature


def all_matrices(rows, cols, p):
    """Every rows x cols matrix over F_p, as an (N, rows, cols) array."""
    flat = np.array(list(itertools.product(range(p), repeat=rows * cols)), dtype=np.int64)
    return flat.reshape(-1, rows, cols)


def invertible(n, p):
    M = all_matrices(n, n, p)
    d = np.rint(np.linalg.det(M.astype(float))).astype(np.int64) % p
    return M[d != 0]


def symmetric_forms(n, p):
    out = []
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in itertools.product(range(p), repeat=len(idx)):
        G = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in zip(idx, vals):
            G[i, j] = G[j, i] = v
        out.append(G)
    return out


def preserving(Ms, G, p):
    img = (Ms.transpose(0, 2, 1) @ G @ Ms) % p
    return int((img == G).all(axis=(1, 2)).sum())


# ---------------------------------------------------------------------------
# discriminant modules
# ---------------------------------------------------------------------------

def test_discriminant_of_a2_and_lambda():
    for L in (catalog.A2, catalog.LAMBDA):
        D = discriminant_group(L)
        assert D.invariant_factors() == (3,)
        g = next(x for x in D.elements() if any(x))
        assert D.q(g) == Fraction(2, 3)


def test_lambda_three_space_is_the_unit_form():
    assert f3_space_from(discriminant_group(catalog.LAMBDA)).gram == ((1,),)


def test_discriminant_e8_2_is_nondefective_f2_space():
    D = discriminant_group(catalog.E8_2)
    assert D.invariant_factors() == (2,) * 8
    V = f2_space_from(D)
    assert V.is_nondefective
    # q = x.x/2 on E8/2E8: 135 nonzero classes of norm 4 give zeros, 120 norm-2 classes give ones
    assert V.zero_count() == 136


def test_coxeter_todd_and_t_phi36_discriminants():
    D = discriminant_group(catalog.COXETER_TODD)
    assert D.invariant_factors() == (3,) * 6
    assert f3_space_from(D).plus_minus == "minus"
    assert discriminant_group(catalog.T_PHI36).invariant_factors() == (3,) * 7


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["E6(2)+A2(2)", "T_inv", "K_mystery", "D8"]), st.data())
def test_polarization_identity(label, data):
    D = discriminant_group(catalog.get(label))
    elem = st.tuples(*[st.integers(0, d - 1) for d in D.orders])
    a, c = data.draw(elem), data.draw(elem)
    assert (D.q(D.add(a, c)) - D.q(a) - D.q(c) - 2 * D.b(a, c)) % 2 == 0
    assert D.q(D.scale(-1, a)) == D.q(a)
    assert D.negate().q(a) == (-D.q(a)) % 2


def test_p_parts():
    D = discriminant_group(catalog.E6_2_A2_2)
    assert p_part(D, 2).invariant_factors() == (2,) * 8
    assert p_part(D, 3).invariant_factors() == (3, 3)
    assert full_orth_order(D) == 1393459200


def test_half_integral_two_part_is_rejected():
    # spinor classes of D6 have q = 3/2
    with pytest.raises(HalfIntegerValues):
        f2_space_from(discriminant_group(catalog.D(6)))


# ---------------------------------------------------------------------------
# orthogonal group orders against exhaustive search
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_f3_orders_match_brute_force(n):
    Ms = invertible(n, 3)
    for G in symmetric_forms(n, 3):
        V = F3Space(tuple(map(tuple, G.tolist())))
        assert orth_order_f3(V) == preserving(Ms, G, 3), G.tolist()


def f2_isometries(Ms, qd, B):
    up = np.triu(B) + np.diag(qd)
    Mt = Ms.transpose(0, 2, 1)
    quad = np.diagonal(Mt @ up @ Ms, axis1=1, axis2=2) % 2
    pol = (Mt @ B @ Ms) % 2
    return int(((quad == qd).all(axis=1) & (pol == B).all(axis=(1, 2))).sum())


@pytest.mark.parametrize("n", [2, 4])
def test_f2_orders_match_brute_force(n):
    Ms = invertible(n, 2)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = {"type2": 0, "type3": 0}
    for qd in itertools.product((0, 1), repeat=n):
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            B = np.zeros((n, n), dtype=np.int64)
            for (i, j), v in zip(pairs, bits):
                B[i, j] = B[j, i] = v
            V = F2Space(qd, tuple(map(tuple, B.tolist())))
            if not V.is_nondefective:
                with pytest.raises(Defective):
                    orth_order_f2(V)
                continue
            seen[V.type] += 1
            assert orth_order_f2(V) == f2_isometries(Ms, np.array(qd), B)
    assert seen["type2"] and seen["type3"]


def test_f2_standard_forms():
    assert orth_order_f2(F2Space.standard(1, "type2")) == 2
    assert orth_order_f2(F2Space.standard(1, "type3")) == 6
    assert orth_order_f2(F2Space.standard(2, "type2")) == 72
    assert orth_order_f2(F2Space.standard(3, "type3")) == 51840
    assert orth_order_f2(F2Space.standard(4, "type2")) == 348364800
    assert orth_order_f2(F2Space.standard(4, "type3")) == 394813440
    assert orth_order_f2(F2Space((), ())) == 1


def test_f3_closed_forms():
    assert orth_order_f3(F3Space.diagonal([1] * 7)) == 18341406720
    V = f3_space_from(discriminant_group(catalog.COXETER_TODD))
    assert orth_order_f3(V) == 26127360


def regular_f3_spaces(n):
    out = []
    for G in symmetric_forms(n, 3):
        V = F3Space(tuple(map(tuple, G.tolist())))
        if V.is_regular:
            out.append((G, V))
    return out


def injective_maps(m, n):
    """All injective linear maps F_3^n -> F_3^m as (N, m, n) arrays."""
    Fs = all_matrices(m, n, 3)
    if n == 0:
        return Fs
    ker = np.array([x for x in itertools.product(range(3), repeat=n) if any(x)], dtype=np.int64)
    zero = ((np.einsum("nij,kj->nki", Fs, ker) % 3) == 0).all(axis=2).any(axis=1)
    return Fs[~zero]


def pulled_back_forms(Fs, GW):
    """Histogram of F^T G_W F over the given maps, keyed by the base-3 code of the matrix."""
    pulled = ((Fs.transpose(0, 2, 1) @ GW @ Fs) % 3).reshape(len(Fs), -1)
    codes = pulled @ 3 ** np.arange(pulled.shape[1])
    return np.bincount(codes, minlength=3 ** pulled.shape[1])


@pytest.mark.parametrize("dim_w", [1, 2, 3])
def test_injective_isometry_count_matches_enumeration(dim_w):
    Ws = regular_f3_spaces(dim_w)
    Vs = {dim_w: regular_f3_spaces(dim_w)}
    Vs[dim_w - 1] = regular_f3_spaces(dim_w - 1) if dim_w > 1 else [(np.zeros((0, 0), dtype=np.int64), F3Space(()))]
    maps = {n: injective_maps(dim_w, n) for n in Vs if n}
    for GW, W in Ws:
        for n, spaces in Vs.items():
            hist = pulled_back_forms(maps[n], GW) if n else np.ones(1, dtype=np.int64)
            for GV, V in spaces:
                code = int(GV.reshape(-1) @ 3 ** np.arange(n * n))
                assert count_injective_isometries(V, W) == hist[code]


def test_injective_isometry_count_rejects_codimension_two():
    with pytest.raises(UnsupportedCodimension):
        count_injective_isometries(F3Space.diagonal([1]), F3Space.diagonal([1, 1, 1]))


def test_brute_force_isometries_of_small_modules():
    D = discriminant_group(catalog.A2)
    assert len(brute_force_isometries(D, D)) == 2
    assert len(brute_force_isometries(D, D, anti=True)) == 0
    assert len(brute_force_isometries(D, D.negate(), anti=True)) == 2


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

def test_glue_a2_with_its_opposite():
    DS = discriminant_group(catalog.A2)
    # graphs of +1 and -1, both giving a unimodular overlattice
    glues = enumerate_glue_groups(DS, DS.negate(), 1)
    assert len(glues) == 2
    assert all(g.order == 3 and g.residual_q_values == (Fraction(0),) for g in glues)
    assert enumerate_glue_groups(DS, DS, 1) == []


def test_glue_into_a_plane_with_residual_three():
    DS = discriminant_group(catalog.A2)  # q = 2/3
    DK = F3Space.diagonal([1, 2]).to_fqm()  # q values (2/3) x^2 + (4/3) y^2
    glues = enumerate_glue_groups(DS, DK, 3)
    # the generator must go to w with q(w) = -2/3 = 4/3: w = (0, +-1)
    assert len(glues) == 2
    assert all(len(g.residual_q_values) == 3 for g in glues)


def test_complement_of_a2_in_e8_has_the_e6_form():
    sig, delta = complement_invariants(catalog.A2, ((8, 0), F3Space(()).to_fqm()))
    assert sig == (6, 0)
    D6 = discriminant_group(catalog.E6)
    assert delta.invariant_factors() == D6.invariant_factors()
    assert delta.q_values() == D6.q_values()


def test_complement_with_full_glue():
    sig, delta = complement_invariants(catalog.A2, ((2, 0), discriminant_group(catalog.A2)), "full")
    assert sig == (0, 0)
    assert delta.order == 1


# ---------------------------------------------------------------------------
# unique primitive embeddings
# ---------------------------------------------------------------------------

def embedding(T):
    tp, tm = signature(T)
    return check_unique_embedding((tp, tm, discriminant_group(T)), (20, 4))


def test_embedding_margins():
    v = embedding(catalog.T_INV)
    assert v.holds is True and v.margin == 10 and v.thresholds == {3: 3}
    v = embedding(catalog.T_PHI36)
    assert v.holds is True and v.margin == 14 and v.thresholds == {3: 9}


def test_embedding_failures():
    assert embedding(catalog.LAMBDA).holds is False  # no room on the positive side
    D = discriminant_group(catalog.E8_2)
    v = check_unique_embedding((8, 0, D), (12, 4))
    assert v.holds is None and "splitting" in v.reason
    v = check_unique_embedding((8, 0, D), (10, 4))
    assert v.holds is False

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmpartners import catalog, exact
from fmpartners.errors import Degenerate, OddLattice, ParseError, ZeroVector
from fmpartners.genus import local_genus_symbol
from fmpartners.lattice import (direct_sum, discriminant_group, divisibility, is_even, is_positive_definite,
                                lattice, lattice_from_dict, lattice_to_dict, load_lattice, rescale, signature)

DETERMINANTS = {"A2": 3, "U": 1, "U(3)": 9, "E6": 3, "E8": 1, "D8": 4, "E8(2)": 256,
                "E6(2)+A2(2)": 2 ** 8 * 3 ** 2, "CoxeterTodd": 3 ** 6, "K_mystery": 3 ** 8,
                "T_inv": 3 * 256, "T_phi36": 3 ** 7, "Lambda": 3, "LambdaTilde": 1}


@pytest.mark.parametrize("label", sorted(catalog.CATALOG))
def test_catalog_invariants(label):
    L = catalog.get(label)
    assert signature(L) == catalog.SIGNATURES[label]
    assert abs(L.determinant) == DETERMINANTS[label]
    assert is_even(L)


def test_rank_complements():
    # K and T fill the primitive cohomology: ranks add to 22
    assert catalog.E8_2.rank + catalog.T_INV.rank == 22
    assert catalog.COXETER_TODD.rank + catalog.T_PHI36.rank == 22
    assert catalog.K_MYSTERY.rank + catalog.T_PHI36.rank == 22


def test_aliases():
    assert catalog.get("E6(2)⊕A2(2)") is catalog.E6_2_A2_2
    assert catalog.get("A_prim") is catalog.COXETER_TODD
    with pytest.raises(ParseError):
        catalog.get("nope")


def test_validation_errors():
    with pytest.raises(ParseError):
        lattice([[1, 2], [3, 4]])
    with pytest.raises(ParseError):
        lattice([[1, 2, 3], [2, 1, 0]])
    with pytest.raises(Degenerate):
        lattice([[1, 1], [1, 1]])
    with pytest.raises(OddLattice):
        discriminant_group(lattice([[1]]))
    with pytest.raises(ZeroVector):
        divisibility(catalog.A2, (0, 0))


def test_divisibility():
    assert divisibility(catalog.A2, (1, 0)) == 1
    assert divisibility(catalog.E8_2, (1, 0, 0, 0, 0, 0, 0, 0)) == 2
    assert divisibility(catalog.U3, (1, 0)) == 3


def test_positive_definiteness():
    assert is_positive_definite(catalog.E8)
    assert not is_positive_definite(catalog.U)


def test_direct_sum_and_rescale():
    L = direct_sum(catalog.A2, rescale(catalog.A2, 2))
    assert L.rank == 4 and L.determinant == 3 * 12
    assert rescale(catalog.E8, 2).determinant == 256


def test_json_round_trip(tmp_path):
    L = catalog.K_MYSTERY
    p = tmp_path / "k.json"
    p.write_text(json.dumps(lattice_to_dict(L)))
    M = load_lattice(p)
    assert M.gram == L.gram and M.label == L.label
    with pytest.raises(ParseError):
        lattice_from_dict({"rows": []})
    with pytest.raises(ParseError):
        lattice_from_dict({"gram": [[1.5]]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_lattice(bad)


def test_discriminant_group_orders():
    assert discriminant_group(catalog.E8).order == 1
    assert discriminant_group(catalog.A2).invariant_factors() == (3,)
    assert discriminant_group(catalog.D8).invariant_factors() == (2, 2)
    assert discriminant_group(catalog.T_INV).invariant_factors() == (2,) * 7 + (6,)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_discriminant_module_is_invariant_under_base_change(A):
    U = [list(r) for r in A]
    if abs(exact.det(U)) != 1:
        U = [[1, A[0][1], A[0][2]], [0, 1, A[1][2]], [0, 0, 1]]
    G = [[2, -1, 0], [-1, 2, -1], [0, -1, 4]]
    G2 = [list(r) for r in exact.matmul(exact.matmul(exact.transpose(U), G), U)]
    D1, D2 = discriminant_group(lattice(G)), discriminant_group(lattice(G2))
    assert D1.invariant_factors() == D2.invariant_factors()
    assert D1.q_values() == D2.q_values()


def test_genus_symbols():
    g3 = local_genus_symbol(catalog.A2, 3)
    assert [(b.valuation, b.rank) for b in g3.blocks] == [(0, 1), (1, 1)]
    assert local_genus_symbol(catalog.E6_2_A2_2, 3).text() == "1^{-6} 3^{-2}"
    assert local_genus_symbol(catalog.E6_2_A2_2, 2).text() == "2^{8}_II"
    assert local_genus_symbol(catalog.E8, 2).text() == "1^{8}_II"


def test_genus_determinant_residue_matches_determinant():
    # product over blocks of p^(v*rank) times unit residues recovers det up to squares
    for L in (catalog.A2, catalog.E6_2_A2_2, catalog.COXETER_TODD, catalog.K_MYSTERY):
        g = local_genus_symbol(L, 3)
        assert sum(b.valuation * b.rank for b in g.blocks) == \
            max(k for k in range(20) if abs(L.determinant) % 3 ** k == 0)
        assert sum(b.rank for b in g.blocks) == L.rank


def test_dual_vector_norm():
    from fmpartners.lattice import dual_vector_norm
    assert dual_vector_norm(catalog.A2, [Fraction(2, 3), Fraction(1, 3)]) == Fraction(2, 3)

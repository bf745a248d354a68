import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmpartners import catalog, exact
from fmpartners.autgrp import automorphism_generators, discriminant_representation, orbit_partition, permutation_bsgs
from fmpartners.enumerate import vectors_norm_div
from fmpartners.lattice import direct_sum, lattice



@pytest.mark.parametrize("label,order", [("A2", 12), ("E6", 103680), ("E8", 696729600)])
def test_root_lattice_orders(label, order):
    G = automorphism_generators(catalog.get(label))
    assert G.order == order
    assert G.check()
    assert permutation_bsgs(G).order == order


def test_small_lattices():
    assert automorphism_generators(catalog.A(3)).order == 48
    assert automorphism_generators(catalog.D(4)).order == 1152
    # A1 + A1 + A2: (2 * 2 * 2) * 12
    A1 = lattice([[2]])
    assert automorphism_generators(direct_sum(A1, A1, catalog.A2)).order == 96


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_order_invariant_under_unimodular_change(c):
    U = [[1, c[0], c[1]], [0, 1, c[2]], [0, 0, 1]]
    G = [[2, -1, 0], [-1, 2, 0], [0, 0, 4]]
    G2 = [list(r) for r in exact.matmul(exact.matmul(exact.transpose(U), G), U)]
    assert automorphism_generators(lattice(G2)).order == automorphism_generators(lattice(G)).order == 24


def test_discriminant_action_of_a2():
    act = discriminant_representation(automorphism_generators(catalog.A2))
    assert act.image_order == 2
    assert act.kernel_order == 6


def test_discriminant_action_of_unimodular_lattice():
    act = discriminant_representation(automorphism_generators(catalog.E8))
    assert act.image_order == 1
    assert act.kernel_order == 696729600


def test_e8_2_discriminant_image():
    act = discriminant_representation(automorphism_generators(catalog.E8_2))
    assert act.image_order == 348364800
    assert act.kernel_order == 2


def test_orbit_partition_of_a2_roots():
    G = automorphism_generators(catalog.A2)
    roots = [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]
    part = orbit_partition(G, roots)
    assert len(part.orbits) == 1 and not part.extended


def test_orbit_partition_extends_incomplete_lists():
    G = automorphism_generators(catalog.A2)
    part = orbit_partition(G, [(1, 0)])
    assert part.extended and len(part.orbits[0]) == 6


def test_k_mystery_div3_vectors_form_one_orbit():
    K = catalog.K_MYSTERY
    G = automorphism_generators(K)
    part = orbit_partition(G, vectors_norm_div(K, 6, 3))
    assert len(part.orbits) == 1 and len(part.orbits[0]) == 36 and not part.extended

"""Named lattices used by the shipped scenarios.

Root lattices use the convention that all roots have norm 2; they are built
from their Dynkin diagrams as 2*I minus the adjacency matrix.
"""

from __future__ import annotations

from .errors import ParseError
from .lattice import Lattice, direct_sum, lattice, rescale


def _dynkin(n: int, edges) -> list:
    g = [[2 * (i == j) for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    return g


def A(n: int) -> Lattice:
    return lattice(_dynkin(n, [(i, i + 1) for i in range(n - 1)]), f"A{n}")


def D(n: int) -> Lattice:
    edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    return lattice(_dynkin(n, edges), f"D{n}")


def E(n: int) -> Lattice:
    # chain 0-1-...-(n-2) with node n-1 attached to node 2
    edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    return lattice(_dynkin(n, edges), f"E{n}")


A2 = A(2)
U = lattice([[0, 1], [1, 0]], "U")
U3 = rescale(U, 3, "U(3)")
E6 = E(6)
E8 = E(8)
D8 = D(8)
E8_2 = rescale(E8, 2, "E8(2)")
E6_2_A2_2 = direct_sum(rescale(E6, 2), rescale(A2, 2), label="E6(2)+A2(2)")

COXETER_TODD = lattice([
    [4, 1, -2, 2, 2, 1, -2, 2, -1, 1, 2, -2],
    [1, 4, 0, 2, -1, -1, 1, -1, -2, 2, -1, 1],
    [-2, 0, 4, -1, -2, 0, 2, 0, -1, 1, 0, 0],
    [2, 2, -1, 4, 0, -1, 0, 0, 0, 2, 0, -1],
    [2, -1, -2, 0, 4, 0, -2, 2, 1, 0, 2, -2],
    [1, -1, 0, -1, 0, 4, -2, 2, 0, -1, 0, -1],
    [-2, 1, 2, 0, -2, -2, 4, -2, 0, 0, -1, 2],
    [2, -1, 0, 0, 2, 2, -2, 4, 0, 1, 2, -2],
    [-1, -2, -1, 0, 1, 0, 0, 0, 4, -1, -1, 0],
    [1, 2, 1, 2, 0, -1, 0, 1, -1, 4, 1, -1],
    [2, -1, 0, 0, 2, 0, -1, 2, -1, 1, 4, -2],
    [-2, 1, 0, -1, -2, -1, 2, -2, 0, -1, -2, 4],
], "CoxeterTodd")

K_MYSTERY = lattice([
    [4, 2, 0, 0, 0, -2, -2, -2, -2, 1, 2, 1],
    [2, 4, 0, 0, 2, -1, -2, -2, -2, -1, 2, 2],
    [0, 0, 4, 2, 0, 0, 2, 0, -1, 0, -1, 0],
    [0, 0, 2, 4, 1, 0, 2, 1, -1, 0, 0, 0],
    [0, 2, 0, 1, 4, 1, 0, -1, 0, -2, 0, 0],
    [-2, -1, 0, 0, 1, 4, 2, 2, 2, -2, -2, -2],
    [-2, -2, 2, 2, 0, 2, 4, 2, 1, -1, -2, -2],
    [-2, -2, 0, 1, -1, 2, 2, 4, 2, -1, -2, -2],
    [-2, -2, -1, -1, 0, 2, 1, 2, 4, -1, -2, -2],
    [1, -1, 0, 0, -2, -2, -1, -1, -1, 4, 1, 1],
    [2, 2, -1, 0, 0, -2, -2, -2, -2, 1, 4, 2],
    [1, 2, 0, 0, 0, -2, -2, -2, -2, 1, 2, 4],
], "K_mystery")

T_INV = direct_sum(A2, U, U, E8_2, label="T_inv")
T_PHI36 = direct_sum(U3, U3, A2, A2, A2, label="T_phi36")
LAMBDA = direct_sum(U, U, E8, E8, A2, label="Lambda")
LAMBDA_TILDE = direct_sum(U, U, U, U, E8, E8, label="LambdaTilde")

CATALOG = {L.label: L for L in [
    A2, U, U3, E6, E8, D8, E8_2, E6_2_A2_2, COXETER_TODD, K_MYSTERY,
    T_INV, T_PHI36, LAMBDA, LAMBDA_TILDE,
]}

# (n_plus, n_minus) for every catalog entry
SIGNATURES = {
    "A2": (2, 0), "U": (1, 1), "U(3)": (1, 1), "E6": (6, 0), "E8": (8, 0),
    "D8": (8, 0), "E8(2)": (8, 0), "E6(2)+A2(2)": (8, 0), "CoxeterTodd": (12, 0),
    "K_mystery": (12, 0), "T_inv": (12, 2), "T_phi36": (8, 2), "Lambda": (20, 2),
    "LambdaTilde": (20, 4),
}

_ALIASES = {"E6(2)⊕A2(2)": "E6(2)+A2(2)", "E8_2": "E8(2)", "A_prim": "CoxeterTodd",
            "Coxeter-Todd": "CoxeterTodd", "K12": "CoxeterTodd", "U3": "U(3)"}


def get(label: str) -> Lattice:
    key = _ALIASES.get(label, label)
    try:
        return CATALOG[key]
    except KeyError:
        raise ParseError(f"unknown catalog lattice {label!r}; known: {', '.join(CATALOG)}") from None

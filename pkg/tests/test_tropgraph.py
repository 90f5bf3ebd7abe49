import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.padic import FieldDescriptor
from artifact.newton_cover import build_covering, build_dual_graph
from artifact.tropgraph import (PathNotInGraph, homology_basis, iota, is_cycle, kappa, pairing, spanning_tree_cycles,
                                tropical_integral, validate_walk, walk_to_chain)
from support import random_dual_graph

seeds = st.integers(0, 10**6)


def genus3_graph():
    F = FieldDescriptor(13, 4, 1, N=20)
    return build_dual_graph(build_covering(F, [F(r) for r in [0, 13, 169, 1, 14, 27, 4]]))


def test_genus3_basis():
    G = genus3_graph()
    B = homology_basis(G)
    assert B.rank == 1
    assert B.cycles[0] == {"U2-U4+": 1, "U2-U4-": -1}
    assert B.gram == [[2]]
    assert B.dual_forms[0].values == {"U2-U4+": Fraction(1, 2), "U2-U4-": Fraction(-1, 2)}


def test_partial_edges():
    G = genus3_graph()
    eta = homology_basis(G).dual_forms[0]
    walk = [("U2-U4+", 1), ("U2-U4-", -1)]
    assert tropical_integral(eta, walk) == 1
    assert tropical_integral(eta, walk, start_fraction=Fraction(1, 2)) == Fraction(3, 4)


def test_walk_validation():
    G = genus3_graph()
    assert validate_walk(G, [("U1-U2", 1), ("U2-U4+", 1)]) == ("U1", "U4")
    with pytest.raises(PathNotInGraph):
        validate_walk(G, [("U1-U2", 1), ("U1-U3", 1)])
    with pytest.raises(PathNotInGraph):
        validate_walk(G, [("nope", 1)])


@given(seeds)
def test_dual_basis_is_kronecker(seed):
    G = random_dual_graph(random.Random(seed))
    B = homology_basis(G)
    for i, w in enumerate(B.walks):
        assert walk_to_chain(w) == {k: v for k, v in B.cycles[i].items() if v}
        for j, eta in enumerate(B.dual_forms):
            assert tropical_integral(eta, w) == (1 if i == j else 0)


@given(seeds)
def test_pairing_doubles_under_iota(seed):
    G = random_dual_graph(random.Random(seed))
    rel = homology_basis(G).relative_cycles
    for c in rel:
        assert kappa(G, iota(G, c)) == {k: v for k, v in c.items() if v}
        for d in rel:
            assert pairing(iota(G, c), iota(G, d)) == 2 * pairing(c, d)


@given(seeds)
def test_dual_forms_are_harmonic_cycles(seed):
    G = random_dual_graph(random.Random(seed))
    B = homology_basis(G)
    assert all(eta.is_harmonic(G) for eta in B.dual_forms)
    assert all(is_cycle(G, c) for c in B.cycles)
    assert len(spanning_tree_cycles(G)) == B.rank == G.betti

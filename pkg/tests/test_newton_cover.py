import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.errors import RepeatedRoots
from artifact.newton_cover import build_covering, build_dual_graph, newton_polygon
from artifact.padic import FieldDescriptor
from support import random_dual_graph

F13 = FieldDescriptor(13, 4, 1, N=20, name="a")
F17 = FieldDescriptor(17, 2, 1, N=20, name="a")


def test_newton_polygon_slopes():
    F = FieldDescriptor(5, N=10)
    # (x - 5)(x - 1)(x - 25) = x^3 - 31 x^2 + 155 x - 125
    poly = [F(-125), F(155), F(-31), F(1)]
    assert newton_polygon(poly).root_valuations() == [Fraction(0), Fraction(1), Fraction(2)]


def genus3_tree():
    roots = [0, 13, 169, 1, 14, 27, 4]
    return roots, build_covering(F13, [F13(r) for r in roots])


def test_genus3_tree_topology():
    roots, tree = genus3_tree()
    assert tree.curve_genus == 3
    assert len(tree.nodes) == 4 and len(tree.edges) == 3
    by_roots = {frozenset(roots[i] for i in n.roots): n for n in tree.nodes.values()}
    inner = by_roots[frozenset({0, 169})]
    mid = by_roots[frozenset({13})]
    disc = by_roots[frozenset({1, 14, 27})]
    top = by_roots[frozenset({4})]
    assert inner.parent == mid.name
    assert mid.parent == top.name and disc.parent == top.name
    even = [e for e in tree.edges if e.even]
    assert [(e.parent, e.child) for e in even] == [(mid.name, inner.name)]
    assert sorted(n.genus for n in tree.nodes.values()) == [0, 0, 1, 1]


def test_genus3_dual_graph_betti_and_dot():
    _, tree = genus3_tree()
    G = build_dual_graph(tree)
    assert G.betti == 1
    assert sorted(G.edges) == ["U1-U2", "U1-U3", "U2-U4+", "U2-U4-"]
    dot = G.to_dot()
    assert dot.startswith("graph Gamma {")
    assert '"U2" -- "U4" [label="U2-U4+"]' in dot


def test_genus1_two_components():
    tree = build_covering(F17, [F17(6), F17(5), F17(-11)])
    G = build_dual_graph(tree)
    assert sorted(G.edges) == ["U1-U2+", "U1-U2-"]
    assert G.betti == 1


def test_locate_roots_and_far_points():
    roots, tree = genus3_tree()
    for r in roots:
        assert tree.locate(F13(r))
    assert tree.locate(F13(2)) == ["U1"]


def test_repeated_roots_rejected():
    with pytest.raises(RepeatedRoots):
        build_covering(F17, [F17(1), F17(1), F17(3)])


@given(st.integers(0, 10**6))
def test_random_covers_have_matching_genus(seed):
    G = random_dual_graph(random.Random(seed))
    tree = G.tree
    # 2g(X) - 2 = sum over odd nodes of (2 g_v - 2) plus 2 per loop of Gamma
    assert G.betti + sum(max(n.genus, 0) for n in tree.nodes.values()) == tree.curve_genus

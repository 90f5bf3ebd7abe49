"""Worked examples and path/reference-point invariance of the integrals."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.bc_abelian import (NotClosed, ReferencePoints, abelian_integral, bc_integral, chabauty_annihilator,
                                 chart_integral, default_edge_point, default_vertex_point, elliptic_add,
                                 elliptic_multiple, homology_difference, period, periods, shortest_walk)
from artifact.coleman import CurvePoint
from artifact.errors import InvalidPath
from support import agrees, chabauty_curve, genus1, genus2, genus3

# expansions as {exponent of the uniformiser: digit}
G1_BC = {4: 15, 6: 11, 8: 12, 10: 1, 12: 11}
G1_PERIOD = {2: 10, 4: 12, 6: 9, 8: 5, 10: 4, 12: 4}
G1_AB = {2: 12, 4: 8, 6: 15, 8: 9, 10: 16, 12: 8}
G2_BC = [{6: 4, 8: 2, 10: 2, 12: 5}, {2: 6, 6: 6, 10: 4, 12: 6}]
G2_PERIOD = [{6: 1, 8: 5, 10: 4, 12: 3}, {2: 5, 4: 1, 6: 5, 8: 1, 10: 1, 12: 6}]
G3_PARTIALS = [
    {-1: 2, 1: 8, 3: 6, 5: 9, 7: 8, 9: 3, 11: 5},
    {-1: 4, 1: 6, 3: 3, 5: 10, 7: 8, 9: 9, 11: 11},
    {-1: 7, 1: 12, 3: 3, 5: 5, 7: 9, 9: 12, 11: 8},
]
G3_BC = {0: 11, 2: 4, 4: 2, 6: 10, 8: 6, 10: 7, 12: 8, 14: 9, 16: 9, 18: 11, 20: 9, 22: 6, 24: 4, 26: 10}
G3_PERIOD = {2: 8, 6: 7, 10: 2, 14: 6, 18: 10, 26: 8}
G3_AB = {0: 11, 4: 2, 8: 6, 12: 8, 16: 9, 20: 9, 24: 4}
CHAB_A = {2: 2, 8: 1, 12: 3, 14: 2, 16: 2, 18: 4}


def _series_terms(terms):
    """Shift a Laurent expansion so the helper can build it from a coefficient list."""
    lo = min(terms)
    return lo, {k - lo: v for k, v in terms.items()}


def _agrees_laurent(x, terms, n):
    lo, shifted = _series_terms(terms)
    return agrees(x.shift(-lo), shifted, n - lo)


class TestGenus1:
    def test_bc_integral(self):
        C, refs, S, R = genus1()
        assert agrees(bc_integral(C, refs, 0, S, R, [("U1-U2+", 1)]).value, G1_BC, 14)

    def test_period(self):
        C, refs, _, _ = genus1()
        (p,) = periods(C, refs, 0)
        assert agrees(p.value, G1_PERIOD, 14)

    def test_abelian_integral(self):
        C, refs, S, R = genus1()
        ab, _, _, trop = abelian_integral(C, refs, 0, S, R, [("U1-U2+", 1)])
        assert trop == [Fraction(1, 2)]
        assert agrees(ab.value, G1_AB, 14)

    def test_abelian_integral_is_path_independent(self):
        C, refs, S, R = genus1()
        ab1, bc1, pers, _ = abelian_integral(C, refs, 0, S, R, [("U1-U2+", 1)])
        ab2, bc2, _, _ = abelian_integral(C, refs, 0, S, R, [("U1-U2-", 1)], pers)
        assert agrees(ab1.value - ab2.value, {}, 14)
        n = homology_difference(C, [("U1-U2+", 1)], [("U1-U2-", 1)])
        assert n == [1]
        assert agrees(bc1.value - bc2.value - pers[0].value * n[0], {}, 14)

    def test_shortest_walk_default(self):
        C, refs, S, R = genus1()
        ab, _, _, _ = abelian_integral(C, refs, 0, S, R)
        assert agrees(ab.value, G1_AB, 14)

    def test_open_walk_is_not_a_period(self):
        C, refs, _, _ = genus1()
        with pytest.raises(NotClosed):
            period(C, refs, 0, [("U1-U2+", 1)])

    def test_walk_must_be_connected(self):
        C, refs, S, R = genus1()
        with pytest.raises(InvalidPath):
            bc_integral(C, refs, 0, S, R, [("U1-U2+", 1), ("U1-U2-", 1)])


class TestGenus2:
    @pytest.mark.parametrize("i", [0, 1])
    def test_bc_and_period(self, i):
        C, refs, S, R = genus2()
        assert agrees(bc_integral(C, refs, i, S, R, [("U1-U2+", 1)]).value, G2_BC[i], 14)
        (p,) = periods(C, refs, i)
        assert agrees(p.value, G2_PERIOD[i], 14)

    @pytest.mark.parametrize("i", [0, 1])
    def test_abelian_vanishes_between_weierstrass_points(self, i):
        C, refs, S, R = genus2()
        ab, _, _, _ = abelian_integral(C, refs, i, S, R, [("U1-U2+", 1)])
        assert agrees(ab.value, {}, 14)


class TestGenus3:
    def test_partials_between_weierstrass_points(self):
        C, refs, _, _ = genus3()
        F = C.F
        S, R = CurvePoint(F(1), F(0)), CurvePoint(F(13), F(0))
        P1, P2 = refs.edges["U1-U3"], refs.edges["U1-U2"]
        parts = [chart_integral(C, "U3", 0, S, P1), chart_integral(C, "U1", 0, P1, P2),
                 chart_integral(C, "U2", 0, P2, R)]
        for val, want in zip(parts, G3_PARTIALS):
            assert _agrees_laurent(val, want, 13)
        assert agrees(parts[0] + parts[1] + parts[2], {}, 13)

    def test_sum_of_forms(self):
        C, refs, S, R = genus3()
        ab, bc, pers, trop = abelian_integral(C, refs, [0, 1, 1], S, R, [("U1-U2", 1), ("U2-U4+", 1)])
        assert trop == [Fraction(1, 2)]
        assert agrees(bc.value, G3_BC, 28)
        assert agrees(pers[0].value, G3_PERIOD, 28)
        assert agrees(ab.value, G3_AB, 28)

    def test_other_edge_gives_same_abelian_value(self):
        C, refs, S, R = genus3()
        pers = periods(C, refs, [0, 1, 1])
        ab, _, _, _ = abelian_integral(C, refs, [0, 1, 1], S, R, [("U1-U2", 1), ("U2-U4-", 1)], pers)
        assert agrees(ab.value, G3_AB, 28)


def test_chabauty_annihilator():
    C, S, R = chabauty_curve()
    res = chabauty_annihilator(C, S, R)
    assert agrees(res["a"], CHAB_A, 20)
    assert agrees(res["b"], {}, 20)
    b, minus_a = res["annihilator"]
    assert b is res["b"] and agrees(minus_a + res["a"], {}, 20)


# --- invariance properties ----------------------------------------------------------


def _shifted_refs(C, shift):
    return ReferencePoints({v: default_vertex_point(C, v, shift) for v in C.graph.vertices},
                           {e: default_edge_point(C, e, shift) for e in C.graph.edges})


@settings(max_examples=3)
@given(st.integers(1, 40))
def test_genus1_period_independent_of_reference_points(shift):
    C, refs, _, _ = genus1()
    (p,) = periods(C, _shifted_refs(C, shift), 0)
    assert agrees(p.value, G1_PERIOD, 14)


@settings(max_examples=3)
@given(st.integers(1, 40), st.sampled_from([0, 1]))
def test_genus2_period_independent_of_reference_points(shift, i):
    C, refs, _, _ = genus2()
    (p,) = periods(C, _shifted_refs(C, shift), i)
    assert agrees(p.value, G2_PERIOD[i], 14)


@settings(max_examples=3)
@given(st.integers(1, 40))
def test_bc_value_independent_of_reference_points(shift):
    C, refs, S, R = genus1()
    bc = bc_integral(C, _shifted_refs(C, shift), 0, S, R, [("U1-U2+", 1)])
    assert agrees(bc.value, G1_BC, 14)


@settings(max_examples=5)
@given(st.integers(1, 3), st.sampled_from(["+", "-"]))
def test_winding_paths_differ_by_periods(k, sign):
    """Going k extra times around the loop changes BC by k periods and leaves Ab fixed."""
    C, refs, S, R = genus1()
    base = [("U1-U2" + sign, 1)]
    loop = [("U1-U2+", 1), ("U1-U2-", -1)]
    walk = loop * k + base
    pers = periods(C, refs, 0)
    ab0, bc0, _, _ = abelian_integral(C, refs, 0, S, R, base, pers)
    ab1, bc1, _, _ = abelian_integral(C, refs, 0, S, R, walk, pers)
    n = homology_difference(C, walk, base)
    assert n == [k]
    assert agrees(bc1.value - bc0.value - pers[0].value * k, {}, 14)
    assert agrees(ab1.value - ab0.value, {}, 14)


CF = [330, -91, 0]  # y^2 = x^3 - 91 x + 330 = (x - 6)(x - 5)(x + 11)
P = (Fraction(-3), Fraction(24))


def test_elliptic_group_law():
    assert elliptic_add(CF, P, (P[0], -P[1])) is None
    Q = elliptic_multiple(CF, P, 2)
    x, y = Q
    assert y * y == x**3 - 91 * x + 330
    assert elliptic_add(CF, elliptic_multiple(CF, P, 3), (x, -y)) == P


@pytest.mark.parametrize("i", [0, 3, 7])
def test_torsion_differences_vanish(i):
    C, refs, _, _ = genus1()
    F = C.F
    pers = periods(C, refs, 0)
    iP = elliptic_multiple(CF, P, i)
    pts = [elliptic_add(CF, (Fraction(r), Fraction(0)), iP) for r in (5, 6, -11)]
    Q = [CurvePoint(F(x), F(y)) for x, y in pts]
    for T in Q[1:]:
        ab, _, _, _ = abelian_integral(C, refs, 0, Q[0], T, pers=pers)
        assert agrees(ab.value, {}, 14)


def test_shortest_walk_genus3():
    C = genus3()[0]
    walk = shortest_walk(C, "U3", "U4")
    assert walk[:2] == [("U1-U3", -1), ("U1-U2", 1)]
    assert len(walk) == 3 and walk[2][0] in ("U2-U4+", "U2-U4-")

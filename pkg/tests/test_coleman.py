import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import _poly
from artifact._kedlaya import kedlaya
from artifact.coleman import (CurvePoint, DifferentResidueDiscs, EvenDegreeUnhandledAfterTransform, PoleInDisc,
                              kedlaya_matrix, make_integrator, tiny_integral)
from artifact.errors import HypothesisViolated
from artifact.padic import FieldDescriptor
from support import point_count, random_odd_model

F7 = FieldDescriptor(7, N=15)


def _omega0(integ, P):
    return integ.values(P)[("omega", 0)]


@given(st.integers(0, 10**6))
def test_frobenius_trace_matches_point_count(seed):
    p, g = random_odd_model(random.Random(seed))
    res = kedlaya(g, p, 4)
    tr = sum(res.M[i][i] for i in range(len(g) - 2))
    assert tr.denominator % p
    a_p = p + 1 - point_count(g, p)
    assert (tr - a_p) % p == 0


def test_elliptic_trace_to_higher_precision():
    g = [1, 0, 0, 1]  # y^2 = x^3 + 1 at p = 7 has a_7 = -4
    res = kedlaya(g, 7, 5)
    tr = res.M[0][0] + res.M[1][1]
    assert (tr + 4) % 7**3 == 0
    assert 7 + 1 - point_count(g, 7) == -4


def test_kedlaya_rejects_bad_models():
    with pytest.raises(HypothesisViolated):
        kedlaya([0, 0, 0, 1], 7, 3)
    with pytest.raises(HypothesisViolated):
        kedlaya([1, 0, 1, 0, 1], 7, 3)
    F = FieldDescriptor(7, N=10)
    with pytest.raises(HypothesisViolated):
        kedlaya_matrix([F(1), F(0), F(0), F(2)], 10)


def test_integral_between_torsion_points_vanishes():
    g = [F7(1), F7(0), F7(0), F7(1)]
    integ = make_integrator(g, [], 15, [F7(-1)])
    P, Q = CurvePoint(F7(0), F7(1)), CurvePoint(F7(2), F7(3))  # orders 3 and 6
    T = CurvePoint(F7(-1), F7(0))
    assert (_omega0(integ, Q) - _omega0(integ, P)).valuation() >= 14
    assert (_omega0(integ, T) - _omega0(integ, P)).valuation() >= 14


def test_frobenius_agrees_with_tiny_integral():
    g = [F7(1), F7(0), F7(0), F7(1)]
    integ = make_integrator(g, [], 15, [F7(-1)])
    Q = CurvePoint(F7(2), F7(3))
    for k in (1, 2, 5):
        x = F7(2 + 7 * k)
        R = CurvePoint(x, (x**3 + 1).sqrt(3))
        for i in (0, 1):
            tiny = tiny_integral(g, i, Q, R, 15)
            glob = integ.values(R)[("omega", i)] - integ.values(Q)[("omega", i)]
            assert (tiny - glob).valuation() >= 13


def test_hyperelliptic_involution_negates():
    g = _poly.from_roots(F7, [F7(0), F7(1), F7(-2)])
    integ = make_integrator(g, [], 15, [F7(0), F7(1), F7(-2)])
    x = F7(3)
    y = _poly.evaluate(g, x).sqrt()
    P, wP = CurvePoint(x, y), CurvePoint(x, -y)
    assert (_omega0(integ, P) + _omega0(integ, wP)).valuation() >= 14


def test_tiny_integral_preconditions():
    g = [F7(1), F7(0), F7(0), F7(1)]
    with pytest.raises(DifferentResidueDiscs):
        tiny_integral(g, 0, CurvePoint(F7(0), F7(1)), CurvePoint(F7(2), F7(3)), 10)
    with pytest.raises(PoleInDisc):
        tiny_integral(g, 0, CurvePoint(F7(-1), F7(0)), CurvePoint(F7(-1), F7(0)), 10)


def test_even_degree_chart_refused():
    g = _poly.from_roots(F7, [F7(0), F7(1), F7(2), F7(3)])
    with pytest.raises(EvenDegreeUnhandledAfterTransform):
        make_integrator(g, [], 10)
